import math

import numpy as np
import pytest

import semharq


@pytest.fixture(scope="module")
def codecs(tmp_path_factory):
    out = tmp_path_factory.mktemp("ckpt")
    code, _, err = semharq.cli(["train", "--epochs", "3", "--out", str(out)])
    assert code == 0, err
    return semharq.Codec.load(out / "codec_a.json"), semharq.Codec.load(out / "codec_b.json")


def test_combine_examples():
    z = [np.array([1.0, 0.0]), np.array([0.0, 1.0])]
    np.testing.assert_allclose(semharq.combine(z, [0.9, 0.1], "best_only"), [1.0, 0.0])
    np.testing.assert_allclose(semharq.combine(z, [0.3, 0.3], "chase"), [0.5, 0.5])
    np.testing.assert_allclose(semharq.combine(z, [0.0, 0.0], "mrc"), [0.5, 0.5])
    w = math.exp(0.9) / (math.exp(0.9) + math.exp(0.1))
    np.testing.assert_allclose(semharq.combine(z, [0.9, 0.1]), [w, 1 - w])


def test_combine_rejects_bad_input():
    with pytest.raises(ValueError):
        semharq.combine([], [], "chase")
    with pytest.raises(ValueError):
        semharq.combine([np.zeros(2)], [0.5], "nope")


def test_quality_pieces():
    assert semharq.uncertainty_score(np.zeros(3)) == 1.0
    assert semharq.agreement_score(["x", "x", "y", "x"]) == 0.75
    mu = np.array([0.3, -1.2])
    assert semharq.self_consistency_score(mu, mu) == pytest.approx(1.0)
    assert semharq.latent_distance_score(mu, mu) == 1.0


def test_channel_and_metrics():
    assert semharq.noise_variance(10.0, 2.0) == pytest.approx(0.2)
    assert semharq.noise_variance(math.inf, 2.0) == 0.0
    z = np.zeros(20000)
    n = semharq.apply_awgn(z, 0.5, seed=3)
    assert np.var(n) == pytest.approx(0.5, rel=0.05)
    assert semharq.sentence_bleu4("the cat sat down", "the cat sat down") == pytest.approx(1.0)
    assert semharq.jaccard(["a", "b"], ["b", "c"]) == pytest.approx(1 / 3)


def test_codec_round_trip(codecs):
    a, b = codecs
    assert a.latent_dim == b.latent_dim == 32
    mu, log_var = b.encode("the weather is nice today .")
    assert mu.shape == (32,) and log_var.shape == (32,)
    assert isinstance(b.decode(mu), str)
    for m in "ABCDEF":
        q = semharq.estimate_quality(mu, b, m, seed=1)
        assert 0.0 <= q <= 1.0


def test_session(codecs):
    a, b = codecs
    r = semharq.run_session("the weather is nice today .", a, b, snr_db=0.0, p_z=1.0,
                            q_th=1.1, k_max=4, seed=7)
    assert r["n_transmissions"] == 4
    assert r["ack_at"] is None
    assert len(r["qualities"]) == 4
    r2 = semharq.run_session("the weather is nice today .", a, b, snr_db=0.0, p_z=1.0,
                             q_th=1.1, k_max=4, seed=7)
    np.testing.assert_array_equal(r["combined"], r2["combined"])


def test_cli_usage_error():
    code, _, err = semharq.cli(["no-such-command"])
    assert code == 1
    assert err
