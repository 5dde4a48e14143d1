"""Cross-checks between the compiled and pure-numpy kernel lanes."""

import math

import numpy as np
import pytest

import monosweep._pykernels as pk

_kernels = pytest.importorskip(
    "monosweep._kernels", reason="compiled extension not built"
)

RTOL, ATOL = 1e-11, 1e-13


def test_two_level_lanes_agree():
    y0 = np.array([0.6, 0.8j])
    args = (pk.FAMILY_CLASS1, pk.SHAPE_SINH, 0.3, 0.5, 0.4, -30.0, 30.0, y0,
            RTOL, ATOL, 0.0, 10**6, True)
    yc, sc_steps, devc = _kernels.two_level(*args)
    yp, sp_steps, devp = pk.two_level(*args)
    assert np.allclose(yc, yp, atol=1e-10)
    assert abs(devc - devp) < 1e-10


def test_two_level_all_families_and_shapes():
    y0 = np.array([1.0, 0.0], dtype=complex)
    for family in (pk.FAMILY_CLASS1, pk.FAMILY_CLASS2):
        for shape in (pk.SHAPE_SINH, pk.SHAPE_LINEAR, pk.SHAPE_CUBIC):
            args = (family, shape, 0.2, 0.4, 0.6, -50.0, 50.0, y0,
                    RTOL, ATOL, 0.0, 10**6, True)
            yc, _, _ = _kernels.two_level(*args)
            yp, _, _ = pk.two_level(*args)
            assert np.allclose(yc, yp, atol=1e-9), (family, shape)


def test_multi_level_lanes_agree():
    y0 = np.array([1.0, 0.0, 0.0], dtype=complex)
    args = (0.4, (0.3, 0.7), -40.0, 40.0, y0, RTOL, ATOL, 0.0, 10**6, True)
    yc, _, _ = _kernels.multi_level(*args)
    yp, _, _ = pk.multi_level(*args)
    assert np.allclose(yc, yp, atol=1e-10)


def test_multi_level_samples_lanes_agree():
    y0 = np.array([1.0, 0.0, 0.0], dtype=complex)
    u_eval = [-1.0, 0.0, 0.5, 2.0]
    args = (0.4, (0.3, 0.7), -3.0, u_eval, y0, RTOL, ATOL, 0.0, 10**6)
    sc, _ = _kernels.multi_level_samples(*args)
    sp, _ = pk.multi_level_samples(*args)
    assert np.allclose(sc, sp, atol=1e-10)


def test_hyp_frame_segment_lanes_agree():
    frame = np.eye(2, dtype=complex)
    alpha, beta, gamma = 0.3j, -0.9j, 0.7 + 0.2j
    for seg in (
        (pk.SEG_LINE, 0.5 + 8j, 0.5 + 0j, 0j, 0.0, 0.0, 0.0),
        (pk.SEG_ARC, 0j, 0j, 1.0 + 0j, 0.6, math.pi, 3 * math.pi),
    ):
        fc, _ = _kernels.hyp_frame_segment(alpha, beta, gamma, *seg, frame,
                                           RTOL, ATOL, 0.0, 10**6)
        fp, _ = pk.hyp_frame_segment(alpha, beta, gamma, *seg, frame,
                                     RTOL, ATOL, 0.0, 10**6)
        assert np.allclose(fc, fp, atol=1e-9)


def test_okubo_line_lanes_agree():
    amat = np.array(
        [[-0.5 - 0.2j, 1.0, 1.0],
         [-0.16 + 0.1j, -1.3 - 0.1j, -0.3 - 0.1j],
         [-0.4 - 0.05j, -0.2 - 0.1j, -1.1 - 0.2j]]
    )
    d0 = np.array([0.4 + 0.1j, 0.5 - 0.3j, 0.2 + 0.2j])
    args = (amat, -30.0, 30.0, d0, RTOL, ATOL, 0.0, 10**6)
    dc, _ = _kernels.okubo_line(*args)
    dp, _ = pk.okubo_line(*args)
    assert np.allclose(dc, dp, atol=1e-9)


def test_oversized_system_rejected():
    y0 = np.zeros(80, dtype=complex)
    y0[0] = 1.0
    with pytest.raises(ValueError):
        _kernels.multi_level(0.4, tuple([0.1] * 79), -1.0, 1.0, y0,
                             RTOL, ATOL, 0.0, 10**6, True)
