import numpy as np
import pytest

from tolang.onnx_stdlib import case_studies
from tolang.onnx_stdlib.cases import NAMES, case_study, listings
from tolang.frontend import parse


def test_fixture_set():
    assert set(case_studies()) == {"matmul", "conv2d", "avgpool1d", "relax", "resnet", "kmeans"}
    assert set(listings()) == set(NAMES)


def test_listings_parse():
    for text in listings().values():
        parse(text)


def test_matmul_example():
    out, rep = case_study("matmul").run()
    assert out["result"].to_nested() == [[19, 22], [43, 50]] and rep.total == 16


def test_avgpool_example():
    out, _ = case_study("avgpool1d").run()
    assert out["result"].to_nested() == [1.5, 3.5]


def _corr2d(x, k, p, s):
    x = np.pad(np.asarray(x, float), p)
    k = np.asarray(k, float)
    oh = (x.shape[0] - k.shape[0]) // s + 1
    ow = (x.shape[1] - k.shape[1]) // s + 1
    return np.array([[np.sum(x[i * s:i * s + k.shape[0], j * s:j * s + k.shape[1]] * k)
                      for j in range(ow)] for i in range(oh)])


@pytest.mark.parametrize("p,s", [(0, 1), (1, 1), (1, 2)])
def test_conv2d_against_oracle(p, s):
    r = np.random.default_rng(p * 10 + s)
    x, k = r.normal(size=(5, 5)), r.normal(size=(3, 2))
    out, rep = case_study("conv2d").run({"in": x.tolist(), "k": k.tolist()}, {"p": p, "s": s})
    want = _corr2d(x, k, p, s)
    np.testing.assert_allclose(out["result"].to_nested(), want, rtol=0, atol=1e-9)
    assert rep.total == want.size * 2 * k.size


def test_relax_example():
    out, _ = case_study("relax").run()
    assert out["result"].to_nested() == [[0, 1, 3], [1, 0, 2], [3, 2, 0]]


def resnet_oracle(x, kernel):
    def conv(t):
        return _corr2d(t, kernel, 1, 1)

    def bn(t):
        m = t.mean()
        return (t - m) / np.sqrt(((t - m) ** 2).mean())

    def relu(t):
        return np.maximum(t, 0)

    x = np.asarray(x, float)
    kernel = np.asarray(kernel, float)
    return relu(bn(conv(relu(bn(conv(x))))) + x)


def test_resnet_identity_kernel():
    x = np.random.default_rng(7).normal(size=(4, 4))
    ident = np.zeros((3, 3))
    ident[1, 1] = 1.0
    out, _ = case_study("resnet").run({"x": x.tolist(), "kernel": ident.tolist()})
    bn = lambda t: (t - t.mean()) / t.std()  # noqa: E731
    want = np.maximum(bn(np.maximum(bn(x), 0)) + x, 0)
    np.testing.assert_allclose(out["result"].to_nested(), want, rtol=0, atol=1e-9)


def test_kmeans_self_distance_and_shapes():
    out, _ = case_study("kmeans").run()
    assert out["self"].to_nested() == [0.0, 0.0]
    assert len(out["result"].to_nested()) == 2
    picks = out["picks"].to_nested()
    assert all(1 <= p <= 5 for p in picks)


def test_kmeans_update_against_oracle():
    data = np.random.default_rng(3).normal(size=(7, 3))
    out, _ = case_study("kmeans").run({"data": data.tolist()}, {"k": 3}, seed=11)
    picks = np.array(out["picks"].to_nested()) - 1
    centers = data[picks]
    d = np.sqrt(((data[:, None, :] - centers[None, :, :]) ** 2).sum(-1))
    assign = d.argmin(1)
    assert (np.array(out["assign"].to_nested()) - 1).tolist() == assign.tolist()
    want = np.array([data[assign == c].sum(0) / max((assign == c).sum(), 1) for c in range(3)])
    np.testing.assert_allclose(out["result"].to_nested(), want, rtol=0, atol=1e-12)
