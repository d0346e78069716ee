import json
import math
import os
import sys
import tempfile

import numpy as np

import framescore as fs


def write(path, text):
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)


def test_tokenize_and_cosine():
    assert fs.tokenize("Olá, MUNDO!") == ["olá", "mundo"]
    assert math.isclose(fs.cosine([1.0, 0.0], [1.0, 1.0]), 1 / math.sqrt(2))
    try:
        fs.cosine([0.0, 0.0], [1.0, 0.0])
    except fs.DomainError:
        pass
    else:
        raise AssertionError("zero vector accepted")


def test_target_score_matches_numpy():
    rng = np.random.default_rng(5)
    a = rng.normal(size=4)
    x = rng.normal(size=(3, 4))
    y = rng.normal(size=(3, 4))
    unit = lambda v: v / np.linalg.norm(v)
    cx = np.array([unit(a) @ unit(r) for r in x])
    cy = np.array([unit(a) @ unit(r) for r in y])
    expected = (cx.mean() - cy.mean()) / np.concatenate([cx, cy]).std(ddof=1)
    got = fs.target_score_vectors(a.tolist(), x.tolist(), y.tolist())
    assert abs(got - expected) < 1e-12


def test_statistics():
    assert fs.cronbach_alpha([[1.0, 1.0], [2.0, 2.0], [3.0, 3.0]]) == 1.0
    r, p = fs.pearson([1, 2, 3, 4], [2, 4, 6, 8.5])
    assert r > 0.99 and 0 <= p < 0.05
    t, df, p = fs.two_sample_t([1, 2, 3], [4, 5, 6])
    assert df == 4 and t < 0 and 0 < p < 1
    assert abs(fs.student_t_cdf(0.0, 7.0) - 0.5) < 1e-12


def test_vectors_roundtrip_and_analogy():
    d = tempfile.mkdtemp()
    path = os.path.join(d, "v.vec")
    write(path, "4 2\nman 1 0\nwoman 1 1\nking 3 0.1\nqueen 3 3\n")
    space = fs.load_vectors(path)
    assert space.words == ["man", "woman", "king", "queen"]
    assert space.dimension == 2 and "king" in space
    assert space.matrix().shape == (4, 2)
    assert fs.analogy(space, "man", "woman", "king") == "queen"
    lex = fs.PolarLexicon("t", ["woman", "ghost"], ["man", "queen"])
    pruned = fs.balance(fs.prune_oov(lex, space), 1)
    assert len(pruned.positive) == len(pruned.negative) == 1
    fs.target_score(space, pruned, "king")
    try:
        space.vector("prince")
    except fs.LookupError as e:
        assert "prince" in str(e)
    else:
        raise AssertionError("unknown word accepted")


def test_tsne_separates_clusters():
    rng = np.random.default_rng(1)
    pts = np.vstack([rng.normal(0, 0.1, (15, 5)), rng.normal(5, 0.1, (15, 5))])
    labels = [f"p{i}" for i in range(30)]
    out = fs.tsne(pts, labels, perplexity=8.0, iterations=1000, seed=2)
    coords = out["coordinates"]
    assert coords.shape == (30, 2)
    assert fs.silhouette_score(coords, [0] * 15 + [1] * 15) > 0.8


def test_cli_ingest():
    d = tempfile.mkdtemp()
    corpus = os.path.join(d, "c.jsonl")
    with open(corpus, "w", encoding="utf-8") as f:
        for i in range(3):
            f.write(json.dumps({"id": f"d{i}", "created_at": f"2021-06-0{i + 1}T12:00:00Z", "text": "um dois três"}) + "\n")
    code, out, err = fs.run_cli(["ingest", "--corpus", corpus])
    assert code == 0, err
    assert "documents" in out
    code, _, err = fs.run_cli(["frobnicate"])
    assert code == 2


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
                print("ok  ", name)
            except Exception as e:  # noqa: BLE001
                failed += 1
                print("FAIL", name, repr(e))
    sys.exit(1 if failed else 0)
