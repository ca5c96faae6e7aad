import io
import json
from pathlib import Path

import pytest

from cartanspaces.catalog import HItem
from cartanspaces.cli import (
    cmd_compute,
    cmd_survey,
    cmd_verify,
    format_pair,
    main,
    parse_pair,
    survey_pairs,
)
from cartanspaces.errors import PairSyntaxError
from cartanspaces.rootsystems import SimpleType, sl, so, sp

GOLDEN = Path(__file__).parent / "golden"

GOLDEN_PAIRS = {
    "sl(6)/sp(6)": "sl6_sp6.json",
    "E6/D5": "e6_d5.json",
    "sp(6)/sl(2)+sl(2)+sl(2)": "sp6_sl2cube.json",
}


def test_parse_simple():
    pair = parse_pair("sl(6)/sp(6)")
    assert pair.factors == (sl(6),)
    assert pair.items == (HItem("sp", 6, (0,)),)


def test_parse_exceptional_names():
    pair = parse_pair("E6/D5")
    assert pair.factors == (SimpleType("E", 6),)
    assert pair.items == (HItem("so", 10, (0,)),)
    pair = parse_pair("F4/B4")
    assert pair.items == (HItem("so", 9, (0,)),)
    pair = parse_pair("so(9)/spin(7)")
    assert pair.items == (HItem("spin", 7, (0,)),)
    pair = parse_pair("so(8)/g2")
    assert pair.items == (HItem("g2", None, (0,)),)


def test_parse_central_part():
    pair = parse_pair("sl(5)/sl(3)+z=[pi_v(2)]")
    assert pair.center is not None and pair.center.dim == 1
    assert pair.center.basis == ((1,),)
    # generator index is validated
    with pytest.raises(PairSyntaxError):
        parse_pair("sl(5)/sl(3)+z=[pi_v(1)]")


def test_parse_multi_factor_and_targets():
    pair = parse_pair("sl(4)+sp(6)/sp(4) in 1+sl(2) in 2+sl(2) in 2+sl(2) in 2")
    assert len(pair.items) == 4
    pair = parse_pair("sp(6)+sl(2)/sp(4) in 1+bridge in 1,2")
    assert pair.items[1] == HItem("bridge", None, (0, 1))
    pair = parse_pair("sl(3)+sl(3)/diag(sl(3))")
    assert pair.items[0].base == "diag"
    # 'in' by type name when unique
    pair = parse_pair("sl(4)+sp(6)/sp(4) in sl(4)")
    assert pair.items[0].targets == (0,)


def test_parse_tablerefs():
    assert parse_pair("sl(6)/T1.4:3(n=3)") == parse_pair("sl(6)/sp(6)")
    assert parse_pair("sl(5)/T1.6:1(n=5,k=3)") == parse_pair("sl(5)/sl(3)")
    assert parse_pair("sp(4)+sp(6)/T1.4:26(n=2,m=3)") == parse_pair(
        "sp(4)+sp(6)/sp(2) in 1+bridge in 1,2+sp(4) in 2")
    assert parse_pair("sl(3)+sl(3)/T1.4:25(s=A,r=2)") == parse_pair(
        "sl(3)+sl(3)/diag(sl(3))")
    # explicit factor targets for a swapped order
    assert parse_pair("sp(6)+sp(4)/T1.4:26(n=2,m=3) in 2,1") == parse_pair(
        "sp(6)+sp(4)/sp(2) in 2+bridge in 2,1+sp(4) in 1")
    with pytest.raises(PairSyntaxError):
        parse_pair("sl(6)/T1.4:3(n=4)")  # needs sl(8)
    with pytest.raises(PairSyntaxError):
        parse_pair("sl(6)/T1.4:3(n=1)")  # out of range
    with pytest.raises(PairSyntaxError):
        parse_pair("sl(6)/T9.9:1(n=3)")


def test_parse_errors_with_offsets():
    with pytest.raises(PairSyntaxError) as err:
        parse_pair("sl(6)/")
    assert err.value.offset == 6
    with pytest.raises(PairSyntaxError):
        parse_pair("sl(6)")
    with pytest.raises(PairSyntaxError):
        parse_pair("sl(6)/sp(4) in 3")
    with pytest.raises(PairSyntaxError):
        parse_pair("qq(6)/sp(4)")


def test_print_parse_identity():
    expressions = [
        "sl(6)/sp(6)",
        "E6/D5",
        "sp(6)/sl(2)+sl(2)+sl(2)",
        "sl(5)/sl(3)+z=[pi_v(2)]",
        "sl(7)/sl(4)+sl(3)+z=[pi_v(3)]",
        "sl(4)+sp(6)/sp(4) in 1+sl(2) in 2+sl(2) in 2+sl(2) in 2",
        "sp(6)+sl(2)/sp(4) in 1+bridge in 1,2",
        "sl(3)+sl(3)/diag(sl(3))",
        "sl(5)+center(1)/sl(3)+z=[z0(1)+pi_v(2)@1]",
    ]
    for text in expressions:
        pair = parse_pair(text)
        assert parse_pair(format_pair(pair)) == pair, text


def test_golden_json(capsys):
    for expr, fname in GOLDEN_PAIRS.items():
        assert cmd_compute(expr, as_json=True) == 0
        out = capsys.readouterr().out
        want = (GOLDEN / fname).read_text()
        assert out == want, expr
        json.loads(out)  # well-formed


def test_exit_codes(capsys):
    assert cmd_compute("sl(6)/sp(6)") == 0
    assert cmd_compute("sl(6)/", ) == 1
    assert cmd_compute("sl(5)/sl(2)") == 2
    capsys.readouterr()


def test_bourbaki_flag(capsys):
    assert cmd_compute("E6/D5", as_json=True, bourbaki=True) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["convention"] == "bourbaki"
    # VO pi_1/pi_5/pi_6 become standard pi_1/pi_6/pi_2: basis rows hit
    # columns 1, 6, 2
    cols = {tuple(row).index("1") for row in payload["space_basis"]}
    assert cols == {0, 5, 1}
    assert cmd_compute("E6/D5", bourbaki=True) == 0
    text = capsys.readouterr().out
    assert "pi_2" in text and "pi_6" in text


def test_verify_all(capsys):
    import time

    t0 = time.perf_counter()
    assert cmd_verify("all") == 0
    elapsed = time.perf_counter() - t0
    out = capsys.readouterr().out
    assert "0 failed" in out
    assert "T3.2" in out and "T4.8" in out
    assert elapsed < 10.0


def test_verify_single_table(capsys):
    assert cmd_verify("T3.2") == 0
    out = capsys.readouterr().out
    # nine series, ranks swept up to 12
    assert out.count("T3.2:") >= 9
    assert cmd_verify("nope") == 1
    capsys.readouterr()


def test_survey_contents():
    rows = survey_pairs(4)
    descs = {format_pair(p): r.complexity for _, p, r in rows}
    assert descs.get("sl(4)/sp(4)") == 0
    rows3 = survey_pairs(3)
    cx1 = [format_pair(p) for _, p, r in rows3 if r.complexity == 1]
    assert "sp(6)/sl(2)+sl(2)+sl(2)" in cx1
    rows1 = survey_pairs(1)
    spherical1 = [format_pair(p) for _, p, r in rows1 if r.complexity == 0]
    assert len(spherical1) <= 3


def test_survey_command(capsys):
    assert cmd_survey(3, "complexity=1") == 0
    out = capsys.readouterr().out
    assert "sp(6)/sl(2)+sl(2)+sl(2)" in out
    assert cmd_survey(2, "spherical") == 0
    capsys.readouterr()


def test_main_dispatch(capsys):
    assert main(["compute", "sl(6)/sp(6)"]) == 0
    assert main(["verify", "T3.4"]) == 0
    assert main(["survey", "--max-rank", "2", "--filter", "spherical"]) == 0
    capsys.readouterr()


def test_survey_golden_determinism(capsys):
    # enumeration order is part of the contract: lexicographic in
    # (table, row, parameters)
    assert cmd_survey(4, "spherical") == 0
    out = capsys.readouterr().out
    want = (GOLDEN / "survey_rank4_spherical.txt").read_text()
    assert out == want
