from numpy.testing import assert_allclose
import numpy as np
import pytest
import math

from focklib.affine import AffineMap, composition_norm
from focklib.errors import InputError, KernelRangeError
from focklib.kernel import (
    QuadraticKernelSpec, SamplePlan, bargmann_kernel, descent_minimum, norm_lower_bound,
    phi_gram, psd_certify, quadratic_form_infimum, quadratic_kernel_gram, random_plan,
    schur_closure_check, structured_plan
)

from helpers import random_complex, random_contraction


def _random_bounded(rng, n):
    return AffineMap(random_contraction(rng, n, rng.uniform(0, 0.9)),
                     0.3 * random_complex(rng, n))


def test_bargmann_kernel_examples(rng):
    assert bargmann_kernel([0], [0]) == 1
    assert bargmann_kernel([1], [1]) == pytest.approx(math.e)
    z, w = random_complex(rng, 3), random_complex(rng, 3)
    assert bargmann_kernel(z, w) == pytest.approx(np.conj(bargmann_kernel(w, z)))
    with pytest.raises(KernelRangeError):
        bargmann_kernel([30], [30])


def test_sample_plan_validation():
    with pytest.raises(InputError):
        SamplePlan([[3.0]], radius=2.0)
    with pytest.raises(InputError):
        SamplePlan([[np.nan]])
    plan = SamplePlan([[1.0]], radius=1.0).extend(SamplePlan([[2.0]], radius=2.0))
    assert len(plan) == 2 and plan.radius == 2.0


def test_phi_gram_examples(rng):
    plan = random_plan(2, 10, 2.0, seed=3)
    assert_allclose(phi_gram(AffineMap.identity(2), 1.0, plan), np.zeros((10, 10)), atol=1e-12)
    b = np.array([0.6, 0.8j])
    single = SamplePlan(np.zeros((1, 2)))
    phi = AffineMap(np.zeros((2, 2)), b)
    assert_allclose(phi_gram(phi, 2.0, single), [[4 - math.e]])
    with pytest.raises(InputError):
        phi_gram(phi, 0, single)


def test_phi_gram_is_hermitian_and_dominated_for_large_scale(rng):
    phi = _random_bounded(rng, 2)
    plan = random_plan(2, 12, 2.0, seed=5)
    images = phi(plan.points)
    M = 2 * max(math.exp(0.5 * float(np.max(np.sum(np.abs(images) ** 2, axis=1)))),
                composition_norm(phi).norm)
    gram = phi_gram(phi, M, plan)
    assert_allclose(gram, gram.conj().T, atol=0)
    assert psd_certify(phi, M, plan).psd


@pytest.mark.parametrize("M, psd", [(1.6, False), (1.7, True)])
def test_psd_certify_single_point(M, psd):
    phi = AffineMap(np.zeros((2, 2)), [0.6, 0.8j])
    result = psd_certify(phi, M, SamplePlan(np.zeros((1, 2))))
    assert result.psd is psd
    assert result.min_eig == pytest.approx(M ** 2 - math.e)


def test_psd_certify_identity():
    result = psd_certify(AffineMap.identity(3), 1.0, random_plan(3, 8, 2.0, seed=1))
    assert result.psd
    assert result.min_eig == pytest.approx(0, abs=1e-12)


def test_psd_certify_is_sound_on_random_plans(rng):
    for i in range(200):
        n = int(rng.integers(1, 5))
        phi = _random_bounded(rng, n)
        norm = composition_norm(phi).norm
        plan = random_plan(n, int(rng.integers(1, 21)), 2.0, seed=i)
        assert psd_certify(phi, norm * (1 + 1e-8), plan).psd


def test_norm_lower_bound_examples():
    assert norm_lower_bound(AffineMap.identity(2), random_plan(2, 6, seed=2)) == 1
    phi = AffineMap([[0.5]], [0.5])
    bound = norm_lower_bound(phi, SamplePlan([[1 / 3]]), bisect_tol=1e-9)
    assert bound == pytest.approx(math.exp(1 / 6), rel=1e-9)
    b = np.array([0.5, 1j])
    bound = norm_lower_bound(AffineMap(np.zeros((2, 2)), b), SamplePlan(np.zeros((1, 2))))
    assert bound == pytest.approx(math.exp(0.5 * 1.25), rel=1e-9)
    with pytest.raises(InputError):
        norm_lower_bound(phi, SamplePlan(np.zeros((0, 1))))


def test_norm_lower_bound_is_exact_at_w0(rng):
    for _ in range(100):
        n = int(rng.integers(1, 4))
        phi = _random_bounded(rng, n)
        certificate = composition_norm(phi)
        w0 = certificate.w0
        plan = SamplePlan([np.zeros(n), w0], radius=max(1.0, float(np.linalg.norm(w0))))
        assert norm_lower_bound(phi, plan, 1e-9) == pytest.approx(certificate.norm, rel=1e-6)


def test_norm_lower_bound_is_monotone_in_the_plan(rng):
    phi = _random_bounded(rng, 2)
    small = random_plan(2, 4, 2.0, seed=11)
    large = small.extend(random_plan(2, 8, 2.0, seed=12))
    norm = composition_norm(phi).norm
    small_bound = norm_lower_bound(phi, small, 1e-10)
    large_bound = norm_lower_bound(phi, large, 1e-10)
    assert large_bound >= small_bound * (1 - 1e-8)
    assert large_bound <= norm * (1 + 1e-8)


def test_structured_plan_contains_the_extremal_point():
    phi = AffineMap([[0.5]], [0.5])
    plan = structured_plan(phi, samples=20, radius=2.0, seed=0)
    assert len(plan) == 22
    assert_allclose(plan.points[0], [0])
    assert_allclose(plan.points[1], [1 / 3], atol=1e-12)
    assert norm_lower_bound(phi, plan) == pytest.approx(math.exp(1 / 6), rel=1e-9)
    # 0以外にw₀がない場合は0だけを先頭に置く。
    assert len(structured_plan(AffineMap.identity(2), samples=40)) == 32


def test_random_plan_is_deterministic():
    first, second = random_plan(3, 16, 2.0, seed=7), random_plan(3, 16, 2.0, seed=7)
    assert np.array_equal(first.points, second.points)
    assert np.all(np.linalg.norm(first.points, axis=1) <= 2.0)
    for samples in (0, 33):
        with pytest.raises(InputError):
            random_plan(3, samples)


def _bargmann_gram(points):
    return np.array([[bargmann_kernel(x, y) for y in points] for x in points])


def test_schur_closure():
    for i in range(20):
        n = 1 + i % 3
        first = _bargmann_gram(random_plan(n, 6, 2.0, seed=i).points)
        second = _bargmann_gram(random_plan(n, 6, 2.0, seed=100 + i).points)
        report = schur_closure_check(first, second)
        assert min(report) >= -1e-10


def test_schur_closure_overflow_guard():
    gram = _bargmann_gram(np.array([[2.6], [0.0]]))
    with pytest.raises(KernelRangeError):
        schur_closure_check(gram, gram)


@pytest.mark.parametrize("T, u, M, inf, v", [
    (np.eye(2), [0, 0], 1.0, 1.0, [0, 0]),
    (np.diag([1.0, 0.0]), [1, 0], 2.0, 3.0, [1, 0]),
])
def test_quadratic_form_infimum_examples(T, u, M, inf, v):
    result = quadratic_form_infimum(QuadraticKernelSpec(T, u, M))
    assert result.inf == pytest.approx(inf)
    assert_allclose(result.v, v, atol=1e-12)
    assert result.psd_equiv and result.bounded_below


@pytest.mark.parametrize("T, u", [
    (np.diag([1.0, 0.0]), [0, 1]),
    (np.diag([1.0, -1.0]), [0, 0]),
])
def test_quadratic_form_unbounded_below(T, u):
    result = quadratic_form_infimum(QuadraticKernelSpec(T, u, 1.0))
    assert result.inf == -math.inf
    assert not result.bounded_below and not result.psd_equiv


def test_quadratic_spec_requires_hermitian():
    with pytest.raises(InputError):
        QuadraticKernelSpec([[1, 1], [0, 1]], [0, 0], 1.0)


def _positive_spec(rng, n, scale):
    B = random_complex(rng, n, n)
    T = B @ B.conj().T / n + 0.5 * np.eye(n)
    eigenvalues, Q = np.linalg.eigh(T)
    root = (Q * np.sqrt(eigenvalues)) @ Q.conj().T
    target = random_complex(rng, n)
    return T, root @ target, scale * np.linalg.norm(target)


def test_descent_matches_closed_form(rng):
    for _ in range(100):
        n = int(rng.integers(1, 5))
        T, u, M = _positive_spec(rng, n, 1.2)
        spec = QuadraticKernelSpec(T, u, M)
        closed = quadratic_form_infimum(spec)
        value, _ = descent_minimum(spec)
        assert value == pytest.approx(closed.inf, abs=1e-6 * max(1.0, abs(closed.inf)))


def test_unbounded_below_detection(rng):
    for _ in range(100):
        n = int(rng.integers(2, 5))
        B = random_complex(rng, n, n - 1)
        T = B @ B.conj().T
        # Tの核の方向を含むuは値域に入らない。
        kernel = np.linalg.svd(B.conj().T)[2][-1].conj()
        u = B @ random_complex(rng, n - 1) + kernel
        result = quadratic_form_infimum(QuadraticKernelSpec((T + T.conj().T) / 2, u, 1.0))
        assert result.inf == -math.inf and not result.bounded_below


def test_quadratic_kernel_psd_equivalence(rng):
    for _ in range(20):
        n = int(rng.integers(1, 4))
        T, u, M = _positive_spec(rng, n, 1.1)
        spec = QuadraticKernelSpec(T, u, M)
        assert quadratic_form_infimum(spec).psd_equiv
        gram = quadratic_kernel_gram(spec, random_complex(rng, 10, n))
        eigenvalues = np.linalg.eigvalsh(gram)
        assert eigenvalues[0] >= -1e-9 * max(1.0, np.max(np.abs(eigenvalues)))

        shrunk = QuadraticKernelSpec(T, u, 0.9 * M / 1.1)
        assert not quadratic_form_infimum(shrunk).psd_equiv
        _, z = descent_minimum(shrunk)
        assert shrunk.value(z) < 0
