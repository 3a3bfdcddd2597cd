import numpy as np
import pytest
from scipy.integrate import quad

from liekernel import (
    ArgumentError,
    BranchPointError,
    ConvergenceError,
    ConvergenceTag,
    KernelRequest,
    PoleError,
    RadialPoint,
    SingularPointError,
    TimeParameter,
    UnsupportedOperationError,
    build_root_system,
    compact_pathsum,
    compact_spectral,
    enumerate_points,
    generate_weyl_group,
    integrate_central_su2,
    noncompact_pathsum,
    parse_group,
    radial_convolve,
    rescale,
    su2_pathsum_series,
    su2_resolvent,
    su2_resolvent_poles,
    su2_spectral_series,
    su11_kernel_d0,
    su11_resolvent_d0,
    winding_lattice,
)
from liekernel.domains import enumerate_domains

RNG = np.random.default_rng(92)

A1 = build_root_system("A", 1)
A2 = build_root_system("A", 2)


def _domain(name, label):
    fam = parse_group(name)
    return next(d for d in enumerate_domains(fam) if d.label == label)


def test_time_parameter_validation():
    with pytest.raises(ArgumentError):
        TimeParameter.heat(0.0)
    with pytest.raises(ArgumentError):
        TimeParameter.heat(-1.0)
    with pytest.raises(ArgumentError):
        TimeParameter(value=1.0, mode=TimeParameter.heat(1.0).mode, epsilon=-0.1)
    tp = TimeParameter.heat(0.5)
    assert tp.effective == -0.5j
    tp = TimeParameter.real(2.0, epsilon=0.1)
    assert tp.effective == 2.0 - 0.1j
    assert TimeParameter.real(2.0).conditionally_convergent


@pytest.mark.parametrize("tau", [0.1, 0.5, 1.0])
def test_dual_series_su2(tau):
    """Path sum vs spectral expansion.

    Points stay where the spectral sum is well conditioned: for small tau
    the kernel decays like exp(-lam phi^2/4 tau) while the spectral terms
    stay O(1), so beyond |phi| ~ 2 the identity drowns in the cancellation
    floor of double precision.  Inside that region both series agree to
    twelve digits.
    """
    for phi in np.linspace(0.35, 2.0, 8):
        req = KernelRequest(rs=A1, phi=RadialPoint.real([phi]), time=TimeParameter.heat(tau))
        a = compact_pathsum(req).value
        b = compact_spectral(req).value
        assert abs(a - b) / abs(b) < 1e-8


@pytest.mark.parametrize("tau", [0.1, 0.5, 1.0])
def test_dual_series_su3(tau):
    for _ in range(4):
        phi = RNG.uniform(0.3, 1.1, 2)
        req = KernelRequest(rs=A2, phi=RadialPoint.real(phi), time=TimeParameter.heat(tau))
        a = compact_pathsum(req).value
        b = compact_spectral(req).value
        assert abs(a - b) / abs(b) < 1e-8


@pytest.mark.parametrize(
    "family,rank,phi",
    [
        ("B", 2, [0.7, 0.45]),
        ("C", 3, [0.6, 0.35, 0.8]),
        ("D", 3, [0.7, 0.4, 0.9]),
        ("A", 3, [0.5, 0.4, 0.7]),
    ],
)
def test_dual_series_other_families(family, rank, phi):
    rs = build_root_system(family, rank)
    req = KernelRequest(rs=rs, phi=RadialPoint.real(phi), time=TimeParameter.heat(0.8))
    a = compact_pathsum(req).value
    b = compact_spectral(req).value
    assert abs(a - b) / abs(b) < 1e-10


def test_engine_matches_printed_spectral_term_by_term():
    phi, t = 1.3, 0.8
    for level in (0, 1, 2, 5, 12):
        req = KernelRequest(
            rs=A1,
            phi=RadialPoint.real([phi]),
            time=TimeParameter.heat(t),
            level_cutoff=level,
        )
        engine = compact_spectral(req).value
        printed = su2_spectral_series(phi, TimeParameter.heat(t), nmax=level + 1)
        assert abs(engine - printed) < 1e-10 * max(1.0, abs(printed))
    # real time with damping, matched truncation
    tp = TimeParameter.real(0.9, epsilon=0.05)
    req = KernelRequest(rs=A1, phi=RadialPoint.real([phi]), time=tp, level_cutoff=7)
    assert abs(compact_spectral(req).value - su2_spectral_series(phi, tp, nmax=8)) < 1e-10


def test_engine_matches_printed_pathsum_term_by_term():
    phi = 2.1
    tp = TimeParameter.heat(0.6)
    req = KernelRequest(rs=A1, phi=RadialPoint.real([phi]), time=tp, tol=1e-14)
    engine = compact_pathsum(req).value
    # evaluate the printed series over exactly the enumerated winding set
    lat = winding_lattice(A1)
    pts = enumerate_points(lat, RadialPoint.real([phi]), 0.6, 1e-14, lam=A1.lam)
    t = tp.effective
    total = 0j
    for (mvec,) in pts:
        x = phi + 2 * np.pi * mvec  # mvec is 2*m1, so this is phi + 4 pi m1
        total += x / (2 * np.sin(phi / 2)) * np.exp(1j * x**2 / (2 * t) + 1j * t / 8)
    printed = np.exp(-1.5 * np.log(4j * np.pi * t)) * total
    assert abs(engine - printed) < 1e-12
    # converged values agree with the series helper too
    assert abs(engine - su2_pathsum_series(phi, tp, mmax=30)) < 1e-12


def test_kernel_weyl_invariance_and_periodicity():
    group = generate_weyl_group(A2)
    lat = winding_lattice(A2)
    tp = TimeParameter.heat(0.45)
    for _ in range(6):
        phi = RNG.uniform(0.3, 1.1, 2)
        base = compact_pathsum(KernelRequest(rs=A2, phi=RadialPoint.real(phi), time=tp)).value
        elem = group.elements[int(RNG.integers(0, group.order))]
        moved = compact_pathsum(
            KernelRequest(rs=A2, phi=RadialPoint.real(elem.matrix @ phi), time=tp)
        ).value
        assert abs(moved - base) < 1e-9
        m = RNG.integers(-1, 2, 2) @ lat.generators
        shifted = compact_pathsum(
            KernelRequest(rs=A2, phi=RadialPoint.real(phi + 2 * np.pi * m), time=tp)
        ).value
        assert abs(shifted - base) < 1e-9


def test_kernel_rescale_invariance():
    tp = TimeParameter.heat(0.4)
    phi = np.array([0.8, 0.5])
    base = compact_pathsum(KernelRequest(rs=A2, phi=RadialPoint.real(phi), time=tp)).value
    for c in (0.6, 1.7):
        rs2 = rescale(A2, c)
        path = compact_pathsum(KernelRequest(rs=rs2, phi=RadialPoint.real(phi / c), time=tp)).value
        spec = compact_spectral(KernelRequest(rs=rs2, phi=RadialPoint.real(phi / c), time=tp)).value
        assert abs(path - base) / abs(base) < 1e-12
        assert abs(spec - base) / abs(base) < 1e-10


def test_wall_rejection_and_limit():
    tp = TimeParameter.heat(0.5)
    with pytest.raises(SingularPointError):
        compact_pathsum(KernelRequest(rs=A1, phi=RadialPoint.real([0.0]), time=tp))
    req = KernelRequest(rs=A1, phi=RadialPoint.real([0.0]), time=tp, wall_limit=True)
    limit = compact_pathsum(req).value
    nearby = compact_pathsum(
        KernelRequest(rs=A1, phi=RadialPoint.real([1e-3]), time=tp)
    ).value
    assert abs(limit - nearby) < 1e-4 * abs(limit)
    # identity value equals the coincidence-limit heat trace density at phi=0
    spec_limit = compact_spectral(
        KernelRequest(rs=A1, phi=RadialPoint.real([0.0]), time=tp, wall_limit=True)
    ).value
    assert abs(limit - spec_limit) / abs(limit) < 1e-7


def test_spectral_requires_damping_in_real_time():
    with pytest.raises(ConvergenceError):
        compact_spectral(
            KernelRequest(rs=A1, phi=RadialPoint.real([1.0]), time=TimeParameter.real(1.0))
        )
    value = compact_spectral(
        KernelRequest(rs=A1, phi=RadialPoint.real([1.0]), time=TimeParameter.real(1.0, epsilon=0.02))
    )
    assert np.isfinite(value.value.real)


def test_real_time_pathsum_is_flagged():
    kv = compact_pathsum(
        KernelRequest(rs=A1, phi=RadialPoint.real([1.0]), time=TimeParameter.real(1.0))
    )
    assert kv.tag is ConvergenceTag.OSCILLATORY
    assert kv.warning is not None


def test_trivial_truncation_single_term():
    req = KernelRequest(
        rs=A1, phi=RadialPoint.real([1.2]), time=TimeParameter.heat(0.7), level_cutoff=0
    )
    vg = 32.0 * np.sqrt(2.0) * np.pi**2
    assert abs(compact_spectral(req).value - 1.0 / vg) < 1e-12


# ---------------------------------------------------------------------------
# rank-1 closed forms
# ---------------------------------------------------------------------------


def test_su2_resolvent_pole_error_and_domain():
    with pytest.raises(PoleError) as err:
        su2_resolvent(1.0, (3**2 - 1) / 8.0)
    assert err.value.index == 3
    with pytest.raises(ArgumentError):
        su2_resolvent(-0.1, 0.3 + 0.1j)
    assert np.isfinite(su2_resolvent(1.0, 0.25 + 1e-3j).real)


def test_su2_resolvent_poles_located():
    poles = su2_resolvent_poles(4.5)
    for n in range(1, 7):
        assert min(abs(p - (n**2 - 1) / 8.0) for p in poles) < 1e-9


def test_su2_resolvent_residues_match_spectral_coefficients():
    """Contour-integral residues against the spectral weights (independent
    oracle; the causal contour closes clockwise, hence the minus sign)."""
    phi = 1.1
    for n in (1, 2, 3, 4):
        lam_n = (n**2 - 1) / 8.0
        r = 0.003
        zs = lam_n + r * np.exp(2j * np.pi * np.arange(256) / 256)
        vals = np.array([su2_resolvent(phi, z) for z in zs])
        residue = (vals * (zs - lam_n)).mean()
        c_n = n * np.sin(n * phi / 2.0) / np.sin(phi / 2.0) / (32.0 * np.sqrt(2.0) * np.pi**2)
        assert abs(residue + c_n) < 1e-6 * abs(c_n)


def test_su2_resolvent_solves_radial_helmholtz():
    # (Delta_T + lam) G = 0 away from the source point
    lam = 0.37 + 0.0j
    h = 1e-4
    for phi in (1.0, 2.4, 4.4):
        w = lambda x: np.sin(x / 2.0)
        wg = lambda x: w(x) * su2_resolvent(x, lam)
        second = (wg(phi + h) - 2.0 * wg(phi) + wg(phi - h)) / h**2
        value = 0.5 * (second / w(phi) + 0.25 * su2_resolvent(phi, lam)) + lam * su2_resolvent(phi, lam)
        assert abs(value) < 1e-6 * max(1.0, abs(su2_resolvent(phi, lam)))


def test_su11_resolvent_d0_values_and_branches():
    theta = 1.4
    lam = 0.3  # 1/4 + 2 lam > 0: exponential decay
    g = su11_resolvent_d0(theta, lam)
    assert abs(g - np.exp(-np.sqrt(0.25 + 2 * lam) * theta) / (8 * np.sqrt(2) * np.pi * np.sinh(theta / 2))) < 1e-15
    big = su11_resolvent_d0(8.0, lam)
    assert abs(big) < abs(g)
    # below the branch point the boundary value oscillates, constant modulus in theta
    lam2 = -0.6
    g1, g2 = su11_resolvent_d0(1.0, lam2), su11_resolvent_d0(2.0, lam2)
    assert abs(abs(g1) * np.sinh(0.5) - abs(g2) * np.sinh(1.0)) < 1e-12
    with pytest.raises(BranchPointError):
        su11_resolvent_d0(1.0, -1.0 / 8.0)
    with pytest.raises(ArgumentError):
        su11_resolvent_d0(-1.0, 0.3)
    # theta -> 0+ divergence from the sinh factor
    assert abs(su11_resolvent_d0(1e-6, 0.3)) > 1e4


def test_su11_d0_laplace_transform_oracle():
    """Numerical Laplace transform of the open-domain kernel along a rotated
    ray reproduces the resolvent (overall sign from the causal contour
    orientation; verified to coincide exactly in modulus and phase)."""
    theta, lam, beta = 1.2, 0.45 + 0.40j, np.pi / 4.0
    rot = np.exp(1j * beta)

    def kernel_t(t):
        return (
            np.exp(-1.5 * np.log(4j * np.pi * t))
            * theta
            / (2.0 * np.sinh(theta / 2.0))
            * np.exp(-1j * theta**2 / (2.0 * t) + 1j * t / 8.0)
        )

    integrand = lambda s: kernel_t(rot * s) * np.exp(1j * lam * rot * s) * rot
    re = quad(lambda s: integrand(s).real, 0.0, 60.0, limit=400)[0]
    im = quad(lambda s: integrand(s).imag, 0.0, 60.0, limit=400)[0]
    assert abs((re + 1j * im) + su11_resolvent_d0(theta, lam)) < 1e-4


# ---------------------------------------------------------------------------
# non-compact engine
# ---------------------------------------------------------------------------


def test_d1_kernel_identical_to_compact():
    d1 = _domain("SU(1,1)", "D1")
    for tp in (TimeParameter.heat(0.4), TimeParameter.real(0.8), TimeParameter.real(1.3, 0.01)):
        for phi in (0.5, 2.0, 4.4):
            a = noncompact_pathsum(
                KernelRequest(rs=A1, phi=RadialPoint.real([phi]), time=tp, domain=d1)
            ).value
            b = compact_pathsum(KernelRequest(rs=A1, phi=RadialPoint.real([phi]), time=tp)).value
            assert abs(a - b) <= 1e-12 * max(1.0, abs(b))


def test_d0_kernel_matches_closed_form():
    d0 = _domain("SU(1,1)", "D0")
    for t in (0.5, 1.0):
        tp = TimeParameter.real(t)
        for theta in np.linspace(0.1, 3.0, 12):
            got = noncompact_pathsum(
                KernelRequest(rs=A1, phi=RadialPoint.mixed([theta], "I"), time=tp, domain=d0)
            ).value
            want = su11_kernel_d0(theta, tp)
            assert abs(got - want) < 1e-10 * max(1.0, abs(want))


def test_noncompact_heat_mode_growing_tag():
    d0 = _domain("SU(1,1)", "D0")
    kv = noncompact_pathsum(
        KernelRequest(rs=A1, phi=RadialPoint.mixed([1.0], "I"), time=TimeParameter.heat(0.5), domain=d0)
    )
    assert kv.tag is ConvergenceTag.GROWING
    assert kv.warning is not None
    kv2 = noncompact_pathsum(
        KernelRequest(rs=A1, phi=RadialPoint.mixed([1.0], "I"), time=TimeParameter.real(0.5), domain=d0)
    )
    assert kv2.tag is ConvergenceTag.OSCILLATORY


def test_noncompact_signature_mismatch():
    d0 = _domain("SU(1,1)", "D0")
    with pytest.raises(ArgumentError):
        KernelRequest(rs=A1, phi=RadialPoint.real([1.0]), time=TimeParameter.real(1.0), domain=d0)
    with pytest.raises(ArgumentError):
        KernelRequest(rs=A1, phi=RadialPoint.mixed([1.0], "I"), time=TimeParameter.real(1.0))


def test_noncompact_su21_d1_periodicity():
    fam = parse_group("SU(2,1)")
    d1 = next(d for d in enumerate_domains(fam) if d.label == "D1")
    rs = A2
    tp = TimeParameter.real(0.9)
    base_pt = RadialPoint.mixed([0.8, 0.9], d1.signature)
    base = noncompact_pathsum(KernelRequest(rs=rs, phi=base_pt, time=tp, domain=d1)).value
    # shift along the surviving sublattice direction (2 sqrt3 y-hat)
    shifted_pt = RadialPoint.mixed([0.8, 0.9 + 2 * np.pi * 2 * np.sqrt(3.0)], d1.signature)
    shifted = noncompact_pathsum(KernelRequest(rs=rs, phi=shifted_pt, time=tp, domain=d1)).value
    assert abs(base - shifted) < 1e-9 * max(1.0, abs(base))
    # a full-lattice translation off the sublattice is NOT a symmetry here
    off_pt = RadialPoint.mixed([0.8 + 2 * np.pi * 2.0, 0.9], d1.signature)
    off = noncompact_pathsum(KernelRequest(rs=rs, phi=off_pt, time=tp, domain=d1)).value
    assert abs(base - off) > 1e-6 * max(1.0, abs(base))


def test_flat_space_bracket_limit():
    # each van Vleck factor alpha.phi / (2 sin(alpha.phi/2)) tends to 1
    for rs in (A1, A2, build_root_system("C", 3)):
        phi = 1e-4 * rs.rho
        bracket = np.prod((rs.positive_roots @ phi) / (2.0 * np.sin(rs.positive_roots @ phi / 2.0)))
        assert abs(bracket - 1.0) < 1e-6


# ---------------------------------------------------------------------------
# rank-1 measure, convolution, semigroup
# ---------------------------------------------------------------------------


def _heat_samples(tau, npts=201):
    grid = np.linspace(0.0, 2.0 * np.pi, npts)
    out = np.empty(npts, dtype=complex)
    for i, x in enumerate(grid):
        req = KernelRequest(
            rs=A1, phi=RadialPoint.real([x]), time=TimeParameter.heat(tau), wall_limit=True
        )
        out[i] = compact_pathsum(req).value
    return out


def test_heat_kernel_normalization():
    def kern(x):
        req = KernelRequest(
            rs=A1, phi=RadialPoint.real([x]), time=TimeParameter.heat(0.5), wall_limit=True
        )
        return compact_pathsum(req).value

    assert abs(integrate_central_su2(A1, kern) - 1.0) < 1e-6


def test_convolution_with_constant_projects():
    tau = 0.4
    f = _heat_samples(tau, npts=121)
    vg = 32.0 * np.sqrt(2.0) * np.pi**2
    g = np.full(121, 1.0 / vg, dtype=complex)
    out = radial_convolve(A1, f, g)
    # integral of the heat kernel is 1, so the output is the constant 1/V_G
    assert np.abs(out - 1.0 / vg).max() < 1e-6


def test_convolution_delta_approximant_returns_g():
    # the tau=1e-3 spike has width ~0.03 and needs a grid that resolves it
    n = 1001
    g = np.cos(np.linspace(0.0, 2.0 * np.pi, n)) + 0.3
    delta = _heat_samples(1e-3, npts=n)
    out = radial_convolve(A1, delta.astype(complex), g.astype(complex))
    interior = slice(40, n - 40)
    assert np.abs(out[interior] - g[interior]).max() < 5e-3


def test_convolution_semigroup():
    n = 201
    k1 = _heat_samples(0.3, n)
    k2 = _heat_samples(0.5, n)
    k12 = _heat_samples(0.8, n)
    out = radial_convolve(A1, k1, k2)
    assert np.abs(out - k12).max() < 1e-4


def test_convolution_rank_restriction():
    with pytest.raises(UnsupportedOperationError):
        radial_convolve(A2, np.ones(32), np.ones(32))
