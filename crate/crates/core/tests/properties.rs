use ellipsoid_core::exact::{int, koszul_sign, partitions, rat, Permutation};
use ellipsoid_core::jumps::{jump_general, jump_pants, jump_via_xi};
use ellipsoid_core::linf::{
    check_filtered, compose, extend_morphism, first_disagreement, invert, words_up_to, Combination, FnMorphism,
    Generator, Identity, Word,
};
use ellipsoid_core::oracle::morphism_bruteforce;
use ellipsoid_core::orbits::{candidate_discontinuities, gamma, jump_set, jump_union, Spectrum};
use ellipsoid_core::rounding::{window, VGen};
use ellipsoid_core::sft::{augment_to, epsilon, exp_mc, xi, DescendantGen, McElement, OrbitGen};
use ellipsoid_core::superpotential::{piecewise_table, wt_t, Cp2};
use ellipsoid_core::{Rational, Side, SpectrumParams};
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (1i64..=30, 1i64..=7).prop_map(|(n, d)| rat(n, d))
}

fn above_one() -> impl Strategy<Value = Rational> {
    (1i64..=60, 1i64..=7).prop_map(|(n, d)| int(1) + rat(n, d))
}

fn side() -> impl Strategy<Value = Side> {
    prop_oneof![Just(Side::Minus), Just(Side::Canonical), Just(Side::Plus)]
}

fn plane(a: Rational, side: Side) -> SpectrumParams {
    SpectrumParams::plane(a, side).unwrap()
}

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap()
}

/// A degree-preserving test morphism on `V` with nonzero values on words
/// mixing odd and even letters.
fn v_rule(w: &Word<VGen>) -> Combination<VGen, Rational> {
    let d = w.degree();
    let total = if d % 2 != 0 { (-1 - d) / 2 } else { (-2 - d) / 2 } as u32;
    let seed: u32 = w
        .letters()
        .iter()
        .map(|g| match *g {
            VGen::Alpha(i, j) => 3 * i + j,
            VGen::Beta(i, j) => i + 5 * j + 1,
        })
        .sum::<u32>()
        + w.len() as u32;
    let target = if d % 2 != 0 {
        if total < 2 {
            return Combination::zero();
        }
        let x = 1 + seed % (total - 1);
        VGen::Alpha(x, total - x)
    } else {
        let x = seed % (total + 1);
        VGen::Beta(x, total - x)
    };
    let c = i64::from(seed % 5) - 2;
    if w.len() == 1 {
        return Combination::generator(w.letters()[0], int(2));
    }
    Combination::generator(target, int(c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dual_order_matches_small_float_perturbation(
        a in prop::collection::vec(small_rational(), 1..=4),
        (x, y) in (1usize..=4, 1usize..=4),
        (m, n) in (1u32..=30, 1u32..=30),
    ) {
        let p = SpectrumParams::canonical(a).unwrap();
        let (x, y) = ((x - 1) % p.dim() + 1, (y - 1) % p.dim() + 1);
        let (u, v) = (p.perturbed_value(x, m), p.perturbed_value(y, n));
        let f = |d: &ellipsoid_core::DualRational| to_f64(&d.main) + 1e-12 * to_f64(&d.eps);
        if u != v {
            prop_assert_eq!(u < v, f(&u) < f(&v));
        }
    }

    #[test]
    fn gamma_walk_is_a_unit_step_path(a in prop::collection::vec(small_rational(), 1..=4), k in 0usize..40) {
        let p = SpectrumParams::canonical(a).unwrap();
        let (g0, g1) = (gamma(&p, k), gamma(&p, k + 1));
        prop_assert_eq!(g0.total() as usize, k);
        prop_assert!(g0.dominated_by(&g1));
        prop_assert_eq!(g1.total(), g0.total() + 1);
    }

    #[test]
    fn sides_differ_exactly_on_jump_sets(a in small_rational(), k in 1u32..30) {
        let minus = gamma(&plane(a.clone(), Side::Minus), k as usize);
        let plus = gamma(&plane(a.clone(), Side::Plus), k as usize);
        let canonical = gamma(&plane(a.clone(), Side::Canonical), k as usize);
        prop_assert_eq!(&canonical, &plus);
        prop_assert_eq!(minus != plus, jump_set(k).contains(&a));
    }

    #[test]
    fn gamma_is_scale_invariant(a in prop::collection::vec(small_rational(), 1..=3), c in small_rational(), k in 0usize..30) {
        let p = SpectrumParams::canonical(a.clone()).unwrap();
        let q = SpectrumParams::canonical(a.iter().map(|x| x * &c).collect()).unwrap();
        prop_assert_eq!(gamma(&p, k), gamma(&q, k));
    }

    #[test]
    fn wt_t_depends_only_on_the_gap(d in 1u32..=4, a in above_one(), step in (1i64..=20, 2i64..=40)) {
        let b = &a + rat(step.0, step.1);
        let breaks = jump_union((1..=d).map(|i| 3 * i - 1));
        let crosses = breaks.iter().any(|x| x >= &a && x <= &b);
        prop_assume!(!crosses);
        let lhs = wt_t(&Cp2, &d, &plane(a, Side::Canonical));
        let rhs = wt_t(&Cp2, &d, &plane(b, Side::Canonical));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn koszul_sign_is_involutive(
        perm in Just((0..6).collect::<Vec<usize>>()).prop_shuffle(),
        degrees in prop::collection::vec(-9i64..=-1, 6),
    ) {
        let sigma = Permutation::new(perm.clone());
        let permuted: Vec<i64> = perm.iter().map(|&i| degrees[i]).collect();
        let mut inverse = vec![0; perm.len()];
        for (pos, &i) in perm.iter().enumerate() {
            inverse[i] = pos;
        }
        let back = Permutation::new(inverse);
        prop_assert_eq!(koszul_sign(&sigma, &degrees) * koszul_sign(&back, &permuted), 1);
    }

    #[test]
    fn jump_routes_agree(a_idx in 0usize..64, i in 1u32..=6, j in 1u32..=6) {
        let locus = jump_union(1..=14);
        let a = locus[a_idx % locus.len()].clone();
        let closed = jump_pants(&a, i, j).unwrap();
        prop_assert_eq!(&closed, &jump_general(&a, &[i, j]).unwrap());
        prop_assert_eq!(&closed, &jump_via_xi(&a, &[i, j]).unwrap());
    }

    #[test]
    fn three_input_jumps_agree(a_idx in 0usize..64, i in 1u32..=4, j in 1u32..=4, k in 1u32..=4) {
        let locus = jump_union(1..=14);
        let a = locus[a_idx % locus.len()].clone();
        prop_assert_eq!(jump_general(&a, &[i, j, k]).unwrap(), jump_via_xi(&a, &[i, j, k]).unwrap());
    }

    #[test]
    fn jumps_vanish_off_the_locus(a in small_rational(), i in 1u32..=5, j in 1u32..=5) {
        let out = i + j + 1;
        prop_assume!(!jump_union(1..=out).contains(&a));
        prop_assert_eq!(jump_general(&a, &[i, j]).unwrap(), int(0));
        prop_assert_eq!(jump_general(&a, &[i]).unwrap(), int(1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn inverse_is_two_sided(a in above_one(), s in side()) {
        let e = epsilon::<Rational>(&plane(a, s));
        let h = invert(&e, 3);
        let window: Vec<OrbitGen> = (1..=5).map(OrbitGen).collect();
        let left = compose(&h, &e, 3);
        prop_assert!(first_disagreement(&left, &Identity::new(), &window, 3).unwrap().is_none());
        let right = compose(&e, &h, 3);
        let window: Vec<DescendantGen> = (1..=5).map(DescendantGen).collect();
        prop_assert!(first_disagreement(&right, &Identity::new(), &window, 3).unwrap().is_none());
    }

    #[test]
    fn xi_is_filtered(a in above_one(), step in (1i64..=9, 1i64..=4)) {
        let b = &a + rat(step.0, step.1);
        let (small, large) = (plane(a, Side::Canonical), plane(b, Side::Canonical));
        let x = xi::<Rational>(&large, &small, 3);
        let (sl, ss) = (Spectrum::new(large.clone()), Spectrum::new(small.clone()));
        for w in words_up_to(&(1..=5).map(OrbitGen).collect::<Vec<_>>(), 3) {
            let bad = check_filtered(&x, &w, |o| sl.action(o.0 as usize), |o| ss.action(o.0 as usize)).unwrap();
            prop_assert!(bad.is_none(), "{:?} -> {:?}", w, bad);
        }
    }
}

#[test]
fn bruteforce_extension_agrees_on_orbit_words() {
    let x = xi::<Rational>(&plane(rat(13, 2), Side::Minus), &plane(rat(13, 2), Side::Plus), 4);
    for w in words_up_to(&(1..=6).map(OrbitGen).collect::<Vec<_>>(), 4) {
        assert_eq!(
            extend_morphism(&x, &w).unwrap(),
            morphism_bruteforce(&x, &w).unwrap(),
            "{w:?}"
        );
    }
}

#[test]
fn bruteforce_extension_agrees_with_odd_letters() {
    let m = FnMorphism::new(v_rule);
    let gens = window(3);
    let mut odd_words = 0;
    for w in words_up_to(&gens, 4) {
        if w.letters().iter().filter(|g| g.is_odd()).count() >= 2 {
            odd_words += 1;
        }
        assert_eq!(
            extend_morphism(&m, &w).unwrap(),
            morphism_bruteforce(&m, &w).unwrap(),
            "{w:?}"
        );
    }
    assert!(odd_words > 0);
}

#[test]
fn exponentiated_mc_element_augments_to_the_closed_count() {
    for d in 1..=4u32 {
        for a in [rat(3, 2), int(4), rat(13, 2), int(20)] {
            let p = plane(a, Side::Canonical);
            let x = exp_mc(
                partitions(d).map(|mut v| {
                    v.sort_unstable();
                    v
                }),
                |&c| McElement {
                    class: c,
                    coefficient: wt_t(&Cp2, &c, &p),
                    orbit_index: 3 * c - 1,
                },
            );
            let closed = Rational::new(
                1.into(),
                num_bigint::BigInt::from(ellipsoid_core::exact::factorial(d).pow(3)),
            );
            assert_eq!(augment_to(&p, &x, 3 * d - 1).unwrap(), closed, "d={d} at {p}");
        }
    }
}

#[test]
fn table_jumps_are_candidates() {
    for d in 1..=5 {
        let tab = piecewise_table(d, &int(1), &int(20), false).unwrap();
        let candidates = candidate_discontinuities(d, &int(1));
        for j in tab.jumps() {
            assert!(candidates.contains(&j), "d={d}: jump at {j}");
        }
    }
}
