import io
import json

import pytest

from collatz_cover import (SchemaTable, build_schema, build_sigma_schema,
                           render, render_str, sigma_infinity)
from collatz_cover.mapgen import format_progression, format_sigma_term


def test_schema_corner_rows():
    table = build_schema(18)
    first = table.column(1)[0]
    assert (first.odd_modulus, first.odd_offset) == (36, 19)
    assert (first.even_modulus, first.even_offset) == (108, 58)
    assert (first.next_modulus, first.next_offset) == (54, 29)
    assert first.starred
    ninth = table.column(9)[0]
    assert (ninth.odd_modulus, ninth.odd_offset) == (36, 27)
    assert (ninth.even_modulus, ninth.even_offset) == (108, 82)
    assert (ninth.next_modulus, ninth.next_offset) == (54, 41)


def test_schema_row_structure():
    table = build_schema(18)
    assert len(table.rows) == 162
    for row in table.rows:
        assert row.even_offset == 3 * row.odd_offset + 1
        assert row.even_modulus == 3 * row.odd_modulus
        assert row.odd_modulus == 36 * 2 ** (row.m - 1)
        assert row.even_modulus == 108 * 2 ** (row.m - 1)
        assert row.next_modulus == 54
        assert row.starred == (row.m == 1)


def test_schema_matches_reference(reference_tables):
    table = build_schema(18)
    columns = reference_tables["schema_columns"]
    for i in range(1, 10):
        expected = columns[str(i)]
        got = table.column(i)
        assert [[r.odd_modulus, r.odd_offset] for r in got] == expected["odd"]
        assert [[r.even_modulus, r.even_offset] for r in got] == expected["even"]
        assert [[r.next_modulus, r.next_offset] for r in got] == expected["next"]
    assert reference_tables["schema_star_row"] == 1


def test_first_column_next_sequence():
    table = build_schema(18)
    assert [r.next_offset for r in table.column(1)] == \
        [29, 1, 41, 7, 17, 49, 11, 19, 23, 25, 53, 13, 47, 37, 5, 43, 35, 31]


def test_sigma_schema_cells():
    table = build_sigma_schema(18)
    first = table.column(1)[0]
    assert format_sigma_term(first.base_residue, first.odd_increment) == \
        "σ∞(54n+29)+2"
    row25 = table.column(2)[4]
    assert format_sigma_term(row25.base_residue, row25.odd_increment) == \
        "σ∞(54n+41)+6"
    assert format_sigma_term(first.base_residue, first.next_increment) == \
        "σ∞(54n+29)"


def test_sigma_schema_increments():
    table = build_sigma_schema(18)
    for row in table.rows:
        assert row.odd_increment == row.m + 1
        assert row.even_increment == row.m
        assert row.next_increment == 0
        assert row.odd_increment - row.even_increment == 1


def test_sigma_schema_matches_reference(reference_tables):
    table = build_sigma_schema(18)
    columns = reference_tables["sigma_columns"]
    for i in range(1, 10):
        expected = columns[str(i)]
        got = table.column(i)
        assert [[r.base_residue, r.odd_increment] for r in got] == expected["odd"]
        assert [[r.base_residue, r.even_increment] for r in got] == expected["even"]
        assert [[r.base_residue, r.next_increment] for r in got] == expected["next"]


def test_sigma_schema_base_residues_come_from_schema():
    schema = build_schema(18)
    sigma = build_sigma_schema(18)
    for a, b in zip(schema.rows, sigma.rows):
        assert (a.class_index, a.m) == (b.class_index, b.m)
        assert a.next_offset == b.base_residue


def test_numeric_consistency_links_both_maps(shared_cache):
    table = build_schema(18)
    for row in table.rows:
        for n in range(3):
            member = row.odd_modulus * n + row.odd_offset
            if member == 1:
                continue  # sigma(1) = 0 by termination; recurrence needs d > 1
            landing = row.next_modulus * n + row.next_offset
            assert sigma_infinity(member, shared_cache) == \
                sigma_infinity(landing, shared_cache) + row.m + 1


def test_numeric_consistency_fixed_point_exception(shared_cache):
    # the n=0 member of 72n+1 is the terminal value itself
    row = next(r for r in build_schema(2).rows if r.odd_offset == 1)
    assert (row.class_index, row.m) == (1, 2)
    assert sigma_infinity(1, shared_cache) == 0


def test_builders_reject_bad_max_m():
    with pytest.raises(ValueError):
        build_schema(0)
    with pytest.raises(ValueError):
        build_sigma_schema(0)


def test_render_text_layout():
    text = render_str(build_schema(1), "text")
    lines = text.splitlines()
    assert len(lines) == 6  # three sections of header + one row
    assert lines[0].startswith("Odd d_1")
    assert lines[1].startswith("36n + 19*")
    assert "108n + 58*" in lines[4 - 1]
    assert lines[5].startswith("54n + 29*")
    assert text.count("*") == 27  # every column, every section, first row only


def test_render_text_sigma_layout():
    text = render_str(build_sigma_schema(2), "text")
    lines = text.splitlines()
    assert lines[1].startswith("σ∞(54n+29)+2")
    assert lines[2].startswith("σ∞(54n+1)+3")
    assert "*" not in text


def test_render_csv_shapes():
    lines = render_str(build_schema(1), "csv").splitlines()
    assert lines[0] == ("i,m,odd_modulus,odd_offset,even_modulus,even_offset,"
                        "next_modulus,next_offset,starred")
    assert len(lines) == 1 + 9  # one data line per class at max_m=1
    assert lines[1] == "1,1,36,19,108,58,54,29,true"
    lines = render_str(build_schema(3), "csv").splitlines()
    assert len(lines) == 1 + 27
    sigma_lines = render_str(build_sigma_schema(1), "csv").splitlines()
    assert sigma_lines[0] == ("i,m,base_residue,odd_increment,"
                              "even_increment,next_increment")
    assert sigma_lines[1] == "1,1,29,2,1,0"


def test_render_json_shapes():
    obj = json.loads(render_str(build_schema(18), "json"))
    assert obj["kind"] == "collatz-map"
    assert obj["max_m"] == 18
    rows = [row for rows in obj["classes"].values() for row in rows]
    assert len(rows) == 162
    assert obj["classes"]["1"][0] == {
        "i": 1, "m": 1,
        "odd": {"modulus": 36, "offset": 19},
        "even": {"modulus": 108, "offset": 58},
        "next": {"modulus": 54, "offset": 29},
        "starred": True,
    }
    sig = json.loads(render_str(build_sigma_schema(2), "json"))
    assert sig["kind"] == "stopping-time-map"
    assert sig["classes"]["1"][0]["increments"] == {"odd": 2, "even": 1, "next": 0}


def test_render_deterministic():
    table = build_schema(5)
    for fmt in ("text", "csv", "json"):
        assert render_str(table, fmt) == render_str(build_schema(5), fmt)


def test_render_unknown_format():
    with pytest.raises(ValueError, match="unknown format"):
        render_str(build_schema(1), "yaml")


def test_render_into_sink():
    table = build_schema(2)
    buf = io.StringIO()
    render(table, "csv", buf)
    assert buf.getvalue() == render_str(table, "csv")


def test_render_sink_failure_carries_context():
    class BrokenSink:
        def write(self, _):
            raise OSError("disk full")

    with pytest.raises(OSError, match="failed writing csv output"):
        render(build_schema(1), "csv", BrokenSink())


def test_format_progression():
    assert format_progression(36, 19) == "36n + 19"
    assert format_progression(36, 19, starred=True) == "36n + 19*"


def test_schema_table_type():
    assert isinstance(build_schema(1), SchemaTable)
