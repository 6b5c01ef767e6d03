import json

import numpy as np
import pytest

from cadlagity.cli import default_sweep, main
from cadlagity.corpus import CorpusSpec, generate_corpus, read_corpus, write_corpus
from cadlagity.errors import BadParams, MalformedInput
from cadlagity.inequalities import build_constants_table


def test_corpus_shape():
    paths = generate_corpus(CorpusSpec(count=200, seed=1, min_jumps=2, max_jumps=6, min_gap=0.05))
    assert len(paths) == 200
    for f in paths:
        bp = f.breakpoints
        if len(bp):
            assert bp[0] >= 0.05 and bp[-1] <= 0.95 + 1e-12
            assert np.all(np.diff(bp) >= 0.05 - 1e-12)
    assert generate_corpus(CorpusSpec(count=5, seed=1)) == generate_corpus(CorpusSpec(count=5, seed=1))


def test_corpus_validation():
    with pytest.raises(BadParams):
        CorpusSpec(min_jumps=5, max_jumps=2)
    with pytest.raises(BadParams):
        CorpusSpec(max_jumps=200, min_gap=0.01)


def test_corpus_roundtrip(tmp_path):
    paths = generate_corpus(CorpusSpec(count=12, seed=2, dim=2))
    out = tmp_path / "c.jsonl"
    write_corpus(paths, out)
    back = read_corpus(out)
    assert [f for _, f in back] == paths
    assert [i for i, _ in back] == [str(k) for k in range(12)]
    out.write_text(out.read_text() + "{bad\n")
    with pytest.raises(MalformedInput) as info:
        read_corpus(out)
    assert info.value.index == 13


def test_seminorms_command(tmp_path, capsys):
    p = tmp_path / "f2.json"
    p.write_text(json.dumps({"dim": 1, "breakpoints": [1 / 3, 2 / 3], "values": [[0], [1], [0]]}))
    assert main(["seminorms", str(p), "--mu", "0.5", "--p", "2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["seminorms"]["holder"] == pytest.approx(3 ** 0.5)
    assert doc["besov"]["sup"] == 1.0


def test_bad_path_exit_code(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"dim": 1, "breakpoints": [0.6, 0.2], "values": [[0], [1], [0]]}))
    assert main(["seminorms", str(p)]) == 2
    assert "error" in capsys.readouterr().err


def test_gen_corpus_and_audit(tmp_path):
    c = tmp_path / "c.jsonl"
    assert main(["gen-corpus", "--count", "6", "--seed", "4", "--out", str(c)]) == 0
    out = tmp_path / "a.csv"
    code = main(["audit", "--corpus", str(c), "--mu", "0.3", "0.7", "--p", "2", "--random", "10", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "check_name,path_id,mu,p,lhs,rhs,slack,ratio,pass"
    assert all(line.endswith(",true") for line in lines[1:])
    names = {line.split(",")[0] for line in lines[1:]}
    assert {"remark31a_lower", "lemma34_f2", "theorem1_seminorms", "chain_f52", "sup_terminal"} <= names


def test_audit_corrupt_constants(tmp_path):
    bad = tmp_path / "k.json"
    bad.write_text("[]")
    assert main(["audit", "--count", "2", "--constants", str(bad), "--out", str(tmp_path / "x.csv")]) == 2
    obj = build_constants_table()
    bad.write_text(json.dumps(obj))
    assert main(["audit", "--count", "2", "--mu", "0.33", "--constants", str(bad), "--out", str(tmp_path / "x.csv")]) == 2


def test_audit_seed_from_env(tmp_path, monkeypatch):
    monkeypatch.setenv("CADLAGITY_SEED", "17")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["audit", "--count", "3", "--mu", "0.5", "--p", "2", "--random", "5"]
    main(args + ["--out", str(a)])
    monkeypatch.delenv("CADLAGITY_SEED")
    main(args + ["--seed", "17", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def _mc_config(tmp_path, **kw):
    cfg = {"experiment": "corollary1", "process": {"kind": "poisson", "lambda": 5}, "mu": 0.25, "p": 2,
           "M": 40, "seed": 1, "triples": [[0.1, 0.4, 0.8], [0.3, 0.5, 0.7]]}
    cfg.update(kw)
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(cfg))
    return p


def test_mc_moment_experiment(tmp_path):
    out = tmp_path / "mc.csv"
    assert main(["mc", str(_mc_config(tmp_path)), "--out", str(out)]) == 0
    rows = out.read_text().splitlines()
    quantities = [r.split(",")[1] for r in rows[1:]]
    assert quantities == ["triple_moment"] * 2 + [
        "triple_besov_p", "left_besov_p", "right_besov_p", "sup_p", "lp_p"
    ]


def test_mc_zero_intensity(tmp_path):
    out = tmp_path / "mc.csv"
    assert main(["mc", str(_mc_config(tmp_path, process={"lambda": 0})), "--out", str(out)]) == 0
    for r in out.read_text().splitlines()[1:]:
        assert r.split(",")[6] == "0.0"


def test_mc_seed_flag_overrides(tmp_path):
    cfg = _mc_config(tmp_path)
    a, b, c = (tmp_path / x for x in ("a.csv", "b.csv", "c.csv"))
    main(["mc", str(cfg), "--out", str(a)])
    main(["mc", str(cfg), "--out", str(b), "--seed", "1"])
    main(["mc", str(cfg), "--out", str(c), "--seed", "2"])
    assert a.read_bytes() == b.read_bytes() != c.read_bytes()


def test_mc_bad_config(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"process": {}, "mu": 0.25}))
    assert main(["mc", str(p)]) == 2
    assert main(["mc", str(_mc_config(tmp_path, experiment="nope"))]) == 2


def test_default_sweep():
    sw = default_sweep()
    assert len(sw) == 10
    assert all(0 <= s < t < u <= 1 for s, t, u in sw)
    assert sw[-1] == (0.0, 0.5, 1.0)
