import io
from pathlib import Path

import pytest

from cuspmult.cli import run

GOLDEN = Path(__file__).resolve().parent.parent / "docs" / "golden"

CASES = [
    ("classify_N8_gamma_1_0_2_1.json", ["classify", "-N", "8", "--gamma", "1,0,2,1", "--json"]),
    ("classify_N25_gamma_1_0_5_1.json", ["classify", "-N", "25", "--gamma", "1,0,5,1", "--json"]),
    ("cusps_N8.json", ["cusps", "-N", "8", "--json"]),
    ("characters_N8.json", ["characters", "-N", "8", "--json"]),
    ("orbit_N8_2_1.json", ["orbit", "-N", "8", "--point", "2,1", "--json"]),
    ("verify_sl2z3_cosets.json", ["verify", "--claim", "sl2z3-cosets", "--json"]),
    ("checkfn_additive_shift.json", ["checkfn", str(GOLDEN / "additive_shift.txt"), "-N", "8", "--json"]),
]


@pytest.mark.parametrize("name, argv", CASES, ids=[c[0] for c in CASES])
def test_matches_golden(name, argv):
    out = io.StringIO()
    run(argv, out, io.StringIO())
    assert out.getvalue() == (GOLDEN / name).read_text()
