use faer::{c64, Mat};
use proptest::prelude::*;
use qmix::lattice::{Lattice, Region};
use qmix::linalg::{self, frobenius, CMat};
use qmix::mixing::*;
use qmix::models::{self, DaviesChain};
use qmix::random;
use qmix::spin_system::*;
use qmix::Error;

fn diag(v: &[f64]) -> CMat {
    Mat::from_fn(v.len(), v.len(), |i, j| if i == j { linalg::re(v[i]) } else { linalg::ZERO })
}

fn state(m: CMat) -> DenseOperator {
    DenseOperator::qubits(m).unwrap()
}

// Ent from the defining formula with explicit logarithms.
fn naive_entropy(ctx: &WeightedContext, f: &CMat) -> f64 {
    let g = linalg::hermitian_part(ctx.gamma(f.as_ref()).as_ref());
    let tr = linalg::trace(g.as_ref()).re;
    let lg = linalg::herm_fn(g.as_ref(), f64::ln);
    let ls = linalg::herm_fn(ctx.sigma().as_ref(), f64::ln);
    linalg::trace((&g * (&lg - &ls)).as_ref()).re - tr * tr.ln()
}

#[test]
fn gamma_examples() {
    let mixed = state(diag(&[0.5, 0.5]));
    let mut rng = random::rng(4);
    let f = random::hermitian(2, &mut rng);
    for s in [0.0, 0.3, 0.5, 1.0] {
        let ctx = WeightedContext::new(&mixed, s).unwrap();
        let g = ctx.gamma(f.as_ref());
        assert!(frobenius((&g - linalg::scaled(f.as_ref(), linalg::re(0.5))).as_ref()) < 1e-14);
    }
    let (a, b) = (0.3, 0.7);
    let sigma = state(diag(&[a, b]));
    let ctx = WeightedContext::new(&sigma, 0.5).unwrap();
    let g = ctx.gamma(pauli('X').as_ref());
    let expected = linalg::scaled(pauli('X').as_ref(), linalg::re((a * b).sqrt()));
    assert!(frobenius((&g - &expected).as_ref()) < 1e-14);

    let rho = random::density(2, &mut rng);
    let sigma = state(rho.clone());
    let ctx = WeightedContext::new(&sigma, 0.0).unwrap();
    let g = ctx.gamma(f.as_ref());
    let expected = linalg::scaled((&rho * &f + &f * &rho).as_ref(), linalg::re(0.5));
    assert!(frobenius((&g - &expected).as_ref()) < 1e-14);
    assert!(matches!(
        WeightedContext::new(&state(diag(&[1.0, 0.0])), 0.5),
        Err(Error::SingularSigma { .. })
    ));
}

#[test]
fn reversibility_examples() {
    let dep = models::depolarizing_qubit(1.0).unwrap();
    let mixed = state(diag(&[0.5, 0.5]));
    for s in [0.0, 0.25, 0.5, 1.0] {
        let ctx = WeightedContext::new(&mixed, s).unwrap();
        let rep = check_s_reversibility(&dep, &ctx, false).unwrap();
        assert!(rep.reversible && rep.residual < 1e-12, "{rep:?}");
    }
    let dav = models::davies_qubit(0.9, 1.0).unwrap();
    let sigma = dav.stationary_state().unwrap();
    for s in [0.0, 0.2, 0.5, 0.8, 1.0] {
        let ctx = WeightedContext::new(&sigma, s).unwrap();
        assert!(check_s_reversibility(&dav, &ctx, false).unwrap().reversible);
    }
    let lat = Lattice::chain(1);
    let kick = LocalTerm::hamiltonian(Region::new(&lat, [0]).unwrap(), linalg::scaled(pauli('X').as_ref(), linalg::re(0.7))).unwrap();
    let perturbed = dav.plus(&[kick]).unwrap();
    let ctx = WeightedContext::new(&sigma, 0.5).unwrap();
    let rep = check_s_reversibility(&perturbed, &ctx, true).unwrap();
    assert!(!rep.reversible && rep.residual > 1e-3 * rep.scale, "{rep:?}");
}

#[test]
fn variance_examples() {
    let mixed = state(diag(&[0.5, 0.5]));
    for s in [0.0, 0.5, 1.0] {
        let ctx = WeightedContext::new(&mixed, s).unwrap();
        let one = state(linalg::identity(2));
        assert!(variance_s(&ctx, &one).unwrap().abs() < 1e-15);
        let x = state(pauli('X'));
        assert!((variance_s(&ctx, &x).unwrap() - 1.0).abs() < 1e-14);
    }
    let mut rng = random::rng(8);
    for _ in 0..50 {
        let sigma = state(random::density(4, &mut rng));
        let f = random::hermitian(4, &mut rng);
        let ctx = WeightedContext::new(&sigma, 0.5).unwrap();
        let v = variance_s(&ctx, &state(f.clone())).unwrap();
        assert!(v.sqrt() <= 2.0 * linalg::op_norm(f.as_ref()) + 1e-12);
    }
}

#[test]
fn entropy_examples() {
    let mixed = state(diag(&[0.5, 0.5]));
    let ctx = WeightedContext::new(&mixed, 0.5).unwrap();
    assert!(entropy_s(&ctx, &state(linalg::identity(2))).unwrap().abs() < 1e-15);
    let e = entropy_s(&ctx, &state(diag(&[1.5, 0.5]))).unwrap();
    let expected = 0.75 * 1.5f64.ln() + 0.25 * 0.5f64.ln();
    assert!((e - expected).abs() < 1e-14);
    assert!((e - 0.130812).abs() < 1e-6);
    assert!(matches!(entropy_s(&ctx, &state(diag(&[1.0, -0.1]))), Err(Error::NotPositive { .. })));
}

#[test]
fn entropy_matches_logarithm_formula_and_scales_linearly() {
    let mut rng = random::rng(21);
    for _ in 0..30 {
        let sigma = state(random::density(4, &mut rng));
        let h = random::hermitian(4, &mut rng);
        let f = linalg::herm_fn(h.as_ref(), f64::exp);
        for s in [0.0, 0.5, 1.0] {
            let ctx = WeightedContext::new(&sigma, s).unwrap();
            if linalg::herm_eigvals(ctx.gamma(f.as_ref()).as_ref())[0] <= 0.0 {
                continue;
            }
            let fast = entropy_s(&ctx, &state(f.clone())).unwrap();
            let slow = naive_entropy(&ctx, &f);
            assert!((fast - slow).abs() < 1e-10 * slow.abs().max(1.0), "{fast} {slow}");
            let c = 2.7;
            let scaled = entropy_s(&ctx, &state(linalg::scaled(f.as_ref(), linalg::re(c)))).unwrap();
            assert!((scaled - c * fast).abs() < 1e-10 * fast.max(1.0));
            assert!(fast >= -1e-14);
        }
    }
}

#[test]
fn gap_examples() {
    let g = 0.6;
    assert!((spectral_gap(&models::depolarizing_qubit(g).unwrap()).unwrap() - g).abs() < 1e-12);
    assert!(matches!(
        spectral_gap(&models::dephasing_qubit(1.0).unwrap()),
        Err(Error::NotPrimitive { .. })
    ));
    let dav = models::davies_qubit(0.0, 1.0).unwrap();
    assert!((spectral_gap(&dav).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn chi2_equals_gap_on_reversible_models() {
    let gens = [
        models::davies_qubit(0.7, 1.0).unwrap(),
        DaviesChain { sites: 2, beta: 0.5, ..Default::default() }.build().unwrap(),
        DaviesChain { sites: 3, beta: 1.0, field_step: 0.2, coupling: 0.3, ..Default::default() }.build().unwrap(),
    ];
    for l in &gens {
        let rep = gap_report(l, &[0.0, 0.5, 1.0]).unwrap();
        for (s, dev) in &rep.chi2_deviation {
            assert!(*dev <= 1e-8, "s = {s}: deviation {dev}");
        }
    }
}

#[test]
fn lanczos_path_matches_dense_path() {
    // Davies spectra are highly degenerate, so the Krylov space is exhausted
    // long before the iteration limit; the deflated √σ direction must not
    // come back through rounding noise.
    for (sites, s) in [(4, 0.0), (5, 0.5)] {
        let l = DaviesChain { sites, field_step: 0.13, coupling: 0.2, ..Default::default() }.build().unwrap();
        let sigma = l.stationary_state().unwrap();
        let ctx = WeightedContext::new(&sigma, s).unwrap();
        let dense = chi2_constant(&l, &ctx).unwrap();
        let apply = |x: &CMat| {
            let a = ctx.gamma_pow(l.apply_adjoint(ctx.gamma_pow(x.as_ref(), -0.5).as_ref()).as_ref(), 0.5);
            let b = ctx.gamma_pow(l.apply(ctx.gamma_pow(x.as_ref(), 0.5).as_ref()).as_ref(), -0.5);
            linalg::scaled((&a + &b).as_ref(), linalg::re(0.5))
        };
        let root = linalg::herm_fn(sigma.as_ref(), f64::sqrt);
        let root = linalg::scaled(root.as_ref(), linalg::re(1.0 / frobenius(root.as_ref())));
        let start = random::hermitian(l.dim(), &mut random::rng(1));
        let top = linalg::lanczos_largest(apply, &start, &[root], 600, 1e-12).unwrap();
        assert!((-top - dense).abs() <= 1e-8 * dense, "{sites}: {} vs {dense}", -top);
    }
    // above the dense limit the gap comes from the Lanczos path
    let l6 = DaviesChain { sites: 6, field_step: 0.13, coupling: 0.2, ..Default::default() }.build().unwrap();
    let l5 = DaviesChain { sites: 5, field_step: 0.13, coupling: 0.2, ..Default::default() }.build().unwrap();
    let g6 = gap_report(&l6, &[0.0]).unwrap().gap;
    let g5 = spectral_gap(&l5).unwrap();
    assert!((g6 - g5).abs() < 1e-3 * g5, "{g6} vs {g5}");
}

#[test]
fn weighted_self_adjointness() {
    let l = DaviesChain { sites: 2, beta: 0.8, ..Default::default() }.build().unwrap();
    let d = dissipative_part(&l).unwrap();
    let sigma = l.stationary_state().unwrap();
    let mut rng = random::rng(13);
    for s in [0.0, 0.5, 1.0] {
        let ctx = WeightedContext::new(&sigma, s).unwrap();
        for _ in 0..20 {
            let f = random::hermitian(4, &mut rng);
            let g = random::hermitian(4, &mut rng);
            let a = ctx.inner(f.as_ref(), d.apply_adjoint(g.as_ref()).as_ref());
            let b = ctx.inner(d.apply_adjoint(f.as_ref()).as_ref(), g.as_ref());
            assert!((a - b).norm() < 1e-10);
        }
    }
}

#[test]
fn mixing_bound_examples() {
    let (chi, _) = mixing_bounds(4.0, 1.0, 0.0, 2.0);
    assert!((chi - 2.0 * (-2f64).exp()).abs() < 1e-15);
    let (_, ls) = mixing_bounds(4.0, 0.0, 1.0, 2.0);
    assert!((ls - (2.0 * 4f64.ln()).sqrt() * (-2f64).exp()).abs() < 1e-15);
    let (chi0, _) = mixing_bounds(8.0, 1.0, 1.0, 0.0);
    assert!(chi0 >= 2.0);
}

#[test]
fn inverse_norm_examples() {
    assert!((inverse_norm(&DenseOperator::maximally_mixed(vec![2, 2])).unwrap() - 4.0).abs() < 1e-12);
    let h = diag(&[2.0, 1.0]);
    let sigma = gibbs_state(h.as_ref(), 1.0);
    let inv = inverse_norm(&state(sigma)).unwrap();
    assert!((inv - (1.0 + 1f64.exp())).abs() < 1e-12);
    let b = thermal_bound(h.as_ref(), 1.0).unwrap();
    assert!(b.lower <= inv && inv <= b.upper);
    assert!((b.upper - 2.0 * 1f64.exp()).abs() < 1e-12);

    let z = pauli('Z');
    let inv = inverse_norm(&state(gibbs_state(z.as_ref(), 1.0))).unwrap();
    assert!((inv - (1f64.exp().powi(2) + 1.0)).abs() < 1e-12);
    assert!(matches!(thermal_bound(z.as_ref(), 1.0), Err(Error::NonPositiveH { .. })));
    let shifted = shifted_thermal_bound(z.as_ref(), 1.0);
    assert!((shifted.upper - 2.0 * 1f64.exp().powi(2)).abs() < 1e-12);
    assert!(inv <= shifted.upper);
}

#[test]
fn entropy_derivative_matches_closed_form() {
    let l = DaviesChain { sites: 2, beta: 0.7, ..Default::default() }.build().unwrap();
    let sigma = l.stationary_state().unwrap();
    let ctx = WeightedContext::new(&sigma, 0.5).unwrap();
    let mut rng = random::rng(31);
    for scale in [1.0, 0.1, 1e-3] {
        let h = linalg::scaled(random::hermitian(4, &mut rng).as_ref(), linalg::re(scale));
        let f = linalg::herm_fn(h.as_ref(), f64::exp);
        let fd = entropy_derivative(&l, &ctx, f.as_ref());
        let exact = entropy_derivative_exact(&l, &ctx, f.as_ref());
        assert!((fd - exact).abs() <= 1e-7 * exact.abs(), "{fd} {exact}");
    }
}

#[test]
fn log_sobolev_estimate_stays_below_gap() {
    let gens = [
        models::depolarizing_qubit(1.0).unwrap(),
        models::davies_qubit(1.0, 1.0).unwrap(),
        DaviesChain { sites: 2, beta: 0.5, ..Default::default() }.build().unwrap(),
    ];
    for l in &gens {
        let sigma = l.stationary_state().unwrap();
        let ctx = WeightedContext::new(&sigma, 0.5).unwrap();
        let lambda = spectral_gap(l).unwrap();
        let opts = LogSobolevOptions { restarts: 8, ..Default::default() };
        let a = log_sobolev_estimate(l, &ctx, &opts).unwrap();
        assert!(a.alpha <= lambda + 1e-8, "alpha {} gap {lambda}", a.alpha);
        assert!(a.alpha > 0.0);
    }
}

#[test]
fn variance_decays_at_twice_the_gap() {
    let l = DaviesChain { sites: 2, beta: 0.9, ..Default::default() }.build().unwrap();
    let sigma = l.stationary_state().unwrap();
    let ctx = WeightedContext::new(&sigma, 0.5).unwrap();
    let lam = chi2_constant(&l, &ctx).unwrap();
    let mut rng = random::rng(17);
    for _ in 0..10 {
        let f = random::hermitian(4, &mut rng);
        let v0 = variance_s(&ctx, &state(f.clone())).unwrap();
        for t in [0.1, 0.5, 1.0, 2.0] {
            let ft = l.evolve_mat(&f, t, Picture::Heisenberg);
            let vt = variance_s(&ctx, &state(linalg::hermitian_part(ft.as_ref()))).unwrap();
            assert!(vt <= v0 * (-2.0 * t * lam).exp() + 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn chi_square_bound_on_random_states(seed in 0u64..10_000, t in 0.0f64..5.0) {
        let l = DaviesChain { sites: 2, beta: 0.6, ..Default::default() }.build().unwrap();
        let sigma = l.stationary_state().unwrap();
        let lambda = spectral_gap(&l).unwrap();
        let inv = inverse_norm(&sigma).unwrap();
        let mut rng = random::rng(seed);
        let rho = random::density_rank(4, 1, &mut rng);
        let rt = l.evolve_mat(&rho, t, Picture::Schroedinger);
        let dist = linalg::trace_norm_herm((&rt - sigma.mat()).as_ref());
        prop_assert!(dist <= mixing_bounds(inv, lambda, 0.0, t).0 + 1e-10);
    }

    #[test]
    fn gamma_half_is_positive(seed in 0u64..10_000) {
        let mut rng = random::rng(seed);
        let sigma = state(random::density(4, &mut rng));
        let ctx = WeightedContext::new(&sigma, 0.5).unwrap();
        let p = random::density(4, &mut rng);
        prop_assert!(linalg::herm_eigvals(ctx.gamma(p.as_ref()).as_ref())[0] >= -1e-14);
        let _ = c64::new(0.0, 0.0);
    }
}

#[test]
fn log_sobolev_estimate_is_reproducible() {
    let l = models::davies_qubit(0.5, 1.0).unwrap();
    let sigma = l.stationary_state().unwrap();
    let ctx = WeightedContext::new(&sigma, 0.5).unwrap();
    let opts = LogSobolevOptions { restarts: 4, seed: 99, ..Default::default() };
    let a = log_sobolev_estimate(&l, &ctx, &opts).unwrap();
    let b = log_sobolev_estimate(&l, &ctx, &opts).unwrap();
    assert_eq!(a.alpha.to_bits(), b.alpha.to_bits());
    assert_eq!(a.entropy.to_bits(), b.entropy.to_bits());
}
