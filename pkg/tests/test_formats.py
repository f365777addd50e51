import random

import pytest

from brute import random_box_instance, random_graph, random_pcd, random_point_instance
from prefixcover.errors import FormatError, StructuralError
from prefixcover.formats import (
    format_boxes,
    format_cd,
    format_hypergraph,
    format_pcd,
    format_points,
    parse_boxes,
    parse_cd,
    parse_hypergraph,
    parse_pcd,
    parse_points,
    pcd_json,
    read_text,
)
from prefixcover.golden import FANO, THM_D4
from prefixcover.reductions import build_perimeter_instance, build_volume_instance
from prefixcover.transform import classic_star


class TestPcd:
    def test_round_trip(self):
        assert parse_pcd(format_pcd(THM_D4)) == THM_D4

    def test_json(self):
        assert parse_pcd(pcd_json(THM_D4)) == THM_D4

    def test_comments(self):
        text = "# star\n3 4 3\n1 4  # first\n2 4\n\n3 4\n"
        assert parse_pcd(text) == classic_star(3)

    def test_random(self):
        rng = random.Random(0)
        for _ in range(20):
            p = random_pcd(rng)
            assert parse_pcd(format_pcd(p)) == p

    @pytest.mark.parametrize("text", ["", "3 4\n1\n2\n3\n", "3 4 3\n1 4\n2 4\n", "3 4 3\n1 x\n2\n3\n",
                                      "{\"d\": 3}"])
    def test_errors(self, text):
        with pytest.raises(FormatError):
            parse_pcd(text)


class TestCd:
    def test_round_trip(self):
        assert parse_cd(format_cd(FANO)) == FANO

    def test_header(self):
        assert format_cd(FANO).splitlines()[0] == "7 3 2 7"

    def test_headerless(self):
        text = "\n".join(" ".join(map(str, b)) for b in FANO.blocks)
        assert parse_cd(text) == FANO

    def test_t3_rejected(self):
        with pytest.raises(FormatError):
            parse_cd("7 3 3 7\n1 2 3\n")

    def test_ragged_headerless(self):
        with pytest.raises(FormatError):
            parse_cd("1 2 3\n1 4\n")

    def test_data_file(self, data_dir):
        cd = parse_cd(read_text(data_dir / "cd_20_12.txt"))
        assert (cd.v, cd.k, cd.d) == (20, 12, 4)


class TestHypergraph:
    def test_round_trip(self):
        g = random_graph(random.Random(1), 4, 3, 0.4)
        assert parse_hypergraph(format_hypergraph(g)) == g

    def test_line_form(self):
        assert parse_hypergraph("4 2\n1 0 2 1 4 0\n").edges == frozenset({((1, 0), (2, 1), (4, 0))})

    def test_errors(self):
        with pytest.raises(FormatError):
            parse_hypergraph("4 2\n1 0 2 1\n")
        with pytest.raises(StructuralError):
            parse_hypergraph("4 2\n1 0 1 1 2 0\n")


class TestBoxes:
    def test_round_trip(self):
        rng = random.Random(2)
        for _ in range(20):
            inst = random_box_instance(rng)
            back = parse_boxes(format_boxes(inst))
            assert (back.d, back.U, back.boxes) == (inst.d, inst.U, inst.boxes)

    def test_count_mismatch(self):
        with pytest.raises(FormatError):
            parse_boxes("1 4 2\n0 1\n")

    def test_outside(self):
        with pytest.raises(StructuralError):
            parse_boxes("1 4 1\n0 5\n")


class TestPoints:
    def test_round_trip(self):
        rng = random.Random(3)
        for vol in (False, True):
            for _ in range(10):
                inst = random_point_instance(rng, volume=vol)
                back = parse_points(format_points(inst))
                assert (back.dim, back.threshold, back.kind, back.top, back.points) == \
                       (inst.dim, inst.threshold, inst.kind, inst.top, inst.points)

    def test_reduction_outputs(self):
        from prefixcover.reductions import Hypergraph3
        g = Hypergraph3.complete(4, 2)
        for inst in (build_perimeter_instance(classic_star(3), g), build_volume_instance(classic_star(3), g)):
            back = parse_points(format_points(inst))
            assert back.points == inst.points and back.threshold == inst.threshold

    def test_header_without_top(self):
        inst = parse_points("2 1 3 unit\n1 2\n")
        assert inst.top == 2

    def test_bad_kind(self):
        with pytest.raises(FormatError):
            parse_points("2 1 3 cubes\n1 2\n")

    def test_count_mismatch(self):
        with pytest.raises(FormatError):
            parse_points("2 2 3 unit 4\n1 2\n")


def test_read_missing_file(tmp_path):
    with pytest.raises(FormatError):
        read_text(tmp_path / "nope.txt")
