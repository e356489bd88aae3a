import json

import pytest

from kantorovich import kernelfile
from kantorovich.errors import InvalidParameter
from kantorovich.kernel_builder import build_matched_kernel
from kantorovich.kernels import bspline, make_classical_kernel


@pytest.mark.parametrize(
    "kernel",
    [
        bspline(4),
        build_matched_kernel(2, (2, 3)),
        build_matched_kernel(5, (-0.3, 0.7, 1.1, 2.9, 4.0)),
        make_classical_kernel("fejer"),
        make_classical_kernel("jackson", k=2, alpha=1.5),
    ],
)
def test_round_trip(kernel, tmp_path):
    path = tmp_path / "k.json"
    kernelfile.save(kernel, path)
    back = kernelfile.load(path)
    assert back == kernel
    assert back.name == kernel.name


def test_spline_combination_bits_survive():
    k = build_matched_kernel(4, (0.1, 1.3, 2.2, 3.7))
    data = json.loads(kernelfile.dumps(k))
    assert [t["coef"] for t in data["terms"]] == list(k.coefficients)
    assert data["type"] == "spline_combination"


def test_handwritten_file(tmp_path):
    path = tmp_path / "k.json"
    path.write_text(json.dumps({"type": "spline_combination", "order": 2, "terms": [
        {"coef": -2, "shift": 3, "spline_order": 2}, {"coef": 3, "shift": 2, "spline_order": 2}]}))
    k = kernelfile.load(path)
    assert k.shifts == (2.0, 3.0) and k.coefficients == (3.0, -2.0)


@pytest.mark.parametrize(
    "text",
    ["not json", "[1, 2]", '{"type": "wavelet"}', '{"type": "bspline"}',
     '{"type": "spline_combination", "terms": []}',
     '{"type": "spline_combination", "order": 2, "terms": [{"coef": 1, "shift": 0, "spline_order": 3}]}'],
)
def test_bad_files(text, tmp_path):
    path = tmp_path / "k.json"
    path.write_text(text)
    with pytest.raises(InvalidParameter):
        kernelfile.load(path)


def test_names():
    assert kernelfile.kernel_from_name("bspline3") == bspline(3)
    chi2 = kernelfile.kernel_from_name("chi2")
    assert chi2.name == "chi2" and chi2.coefficients == pytest.approx((3, -2), abs=1e-12)
    assert kernelfile.kernel_from_name("jackson2:2").name == "jackson2:2"
    assert kernelfile.kernel_from_name("Vallee-Poussin").name == "vallee_poussin"
    for name in kernelfile.BUILTIN_NAMES:
        assert kernelfile.kernel_from_name(name).name
    with pytest.raises(InvalidParameter):
        kernelfile.kernel_from_name("gabor")
