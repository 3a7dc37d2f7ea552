import subprocess
import sys

import pytest

from quadbundle.cli import EXIT_ERROR, EXIT_OK, atom_multiset, main, parse_structured, run
from quadbundle.config import bundled_configs, load_config, parse_config
from quadbundle.errors import ConfigError

BASIC = """\
name = t
base = rational
params = 2
mode = by-snc
primes = 5, 7
matrix:
  l0, 0, 0
  0, l1, 0
  0, 0, l2
end
"""


def test_bundled_configs_parse():
    assert bundled_configs() == ["arith_quadric.cfg", "conic_bundle.cfg", "diag_net.cfg"]
    arith = load_config("arith_quadric")
    assert arith.mode == "smooth" and arith.base.kind == "quadratic" and arith.base.d == -5
    diag = load_config("diag_net")
    assert diag.mode == "by-snc" and diag.family.n == 3 and diag.r == 2


@pytest.mark.parametrize(
    "edit,line,key",
    [
        (("  l0, 0, 0", "  l0*x, 0, 0"), 7, "matrix"),
        (("  0, l1, 0", "  1, l1, 0"), 7, "matrix"),
        (("base = rational", "base = finite 2"), 2, "base"),
        (("base = rational", "base = reals"), 2, "base"),
        (("mode = by-snc", "mode = fancy"), 4, "mode"),
        (("params = 2", "params = two"), 3, "params"),
        (("primes = 5, 7", "primes = 5, 8"), 5, "primes"),
        (("end\n", ""), 6, "matrix"),
    ],
)
def test_parse_errors_name_line_and_key(edit, line, key):
    with pytest.raises(ConfigError) as exc:
        parse_config(BASIC.replace(*edit))
    assert exc.value.key == key
    assert exc.value.line == line
    assert f"line {line}" in str(exc.value)


def test_unknown_key():
    with pytest.raises(ConfigError, match="unknown key"):
        parse_config(BASIC + "colour = blue\n")


def test_run_arith_reports_ten_and_non_split():
    rep = run(load_config("arith_quadric").with_overrides(primes=(3,)))
    text = rep.render("text")
    assert "enumerated {10: 1}" in text and "non-split 1" in text
    assert rep.exit_code == EXIT_OK


def test_run_diag_net_three_sign_ics():
    rep = run(load_config("diag_net").with_overrides(primes=(5, 7)))
    ics = [a for a in rep.decomposition.motive if a.ic]
    assert len(ics) == 3 and all(a.label == "sign" for a in ics)
    assert rep.mismatches == 0 and rep.verdict == "OK"


def test_smooth_split_family_is_pure_tate():
    cfg = parse_config("base = rational\nparams = 0\nmode = smooth\nprimes = 5, 7\nmatrix:\n 0, 1\n 1, 0\nend\n")
    rep = run(cfg)
    assert all(a.label == "triv" for a in rep.decomposition.motive)
    assert rep.verdict == "OK"


def test_structured_round_trip_and_determinism():
    cfg = load_config("diag_net").with_overrides(format="structured")
    a = run(cfg).render()
    b = run(cfg).render()
    assert a == b
    parsed = parse_structured(a)
    assert parsed["atoms"] == atom_multiset(run(cfg).decomposition.motive)
    assert parsed["census"] == {5: (186, 186), 7: (456, 456), 11: (1596, 1596)}
    assert parsed["verdict"] == "OK"


def test_ledger_items_appear_once():
    cfg = parse_config(BASIC.replace("mode = by-snc", "mode = by-snc\nassume = snc: declared"))
    rep = run(cfg)
    assert len(rep.ledger) == len(set(rep.ledger))
    assert sum("declared" in x for x in rep.ledger) == 1


def test_main_exit_codes(tmp_path, capsys):
    good = tmp_path / "g.cfg"
    good.write_text(BASIC)
    out = tmp_path / "r.txt"
    assert main(["run", str(good), "--primes", "5", "--out", str(out)]) == EXIT_OK
    assert "verdict: OK" in out.read_text()
    bad = tmp_path / "b.cfg"
    bad.write_text(BASIC.replace("l0, 0, 0", "l0*x, 0, 0"))
    assert main(["run", str(bad)]) == EXIT_ERROR
    assert "line 7" in capsys.readouterr().err
    assert main(["run", "no_such_config"]) == EXIT_ERROR


def test_mismatch_exit_code():
    rep = run(load_config("diag_net").with_overrides(primes=(5,)))
    rep.ledgers[5].mismatches.append(object())
    assert rep.exit_code == 2 and rep.verdict == "MISMATCH"


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "quadbundle", "run", "conic_bundle", "--format", "structured"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert "ATOM U1 1 sign 1" in res.stdout
    assert "VERDICT OK" in res.stdout
