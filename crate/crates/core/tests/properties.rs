use adc_core::chords::{self, ChordRecord, ChordSpectrum, FrontData, MorseData};
use adc_core::floer::{self, AdcVerdict, FillingVerdict, LoopHomologyTable};
use adc_core::graded::{AbelianGroup, ChainComplex, Coefficients, GradedGroup, IntegerMatrix};
use adc_core::surgery::{self, canonical_rotation, AdcCertificate, OrbitOrigin, OrbitRecord, OrbitSpectrum, Rescale, Stage};
use adc_core::weinstein::{self, HandlePresentation};
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;
use std::collections::BTreeMap;

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn presentation(n: u32, cotangent: usize, wedges: &[(usize, u32)]) -> HandlePresentation {
    let mut p = HandlePresentation::ball(n);
    for _ in 0..cotangent {
        p = weinstein::boundary_connect_sum(&p, &HandlePresentation::cotangent_sphere(n)).unwrap();
    }
    for &(copies, k) in wedges {
        let w = HandlePresentation::wedge_thickening(copies, &[k], 2 * n).unwrap();
        p = weinstein::boundary_connect_sum(&p, &w).unwrap();
    }
    p
}

fn presentation_of_dim(n: u32) -> impl Strategy<Value = HandlePresentation> {
    (0usize..=2, prop::collection::vec((1usize..=2, 1u32..n), 0..=2)).prop_map(move |(c, w)| presentation(n, c, &w))
}

fn arb_presentation() -> impl Strategy<Value = HandlePresentation> {
    (3u32..=5).prop_flat_map(presentation_of_dim)
}

fn three_presentations() -> impl Strategy<Value = (HandlePresentation, HandlePresentation, HandlePresentation)> {
    (3u32..=5).prop_flat_map(|n| (presentation_of_dim(n), presentation_of_dim(n), presentation_of_dim(n)))
}

fn arb_group() -> impl Strategy<Value = GradedGroup> {
    prop::collection::btree_map(0i64..=5, (0usize..=3, prop::collection::vec(2i64..=12, 0..=2)), 0..=4).prop_map(|m| {
        let mut g = GradedGroup::new();
        for (k, (r, t)) in m {
            g.set(k, AbelianGroup::from_i64(r, &t));
        }
        g
    })
}

fn arb_spectrum(n: u32) -> impl Strategy<Value = ChordSpectrum> {
    prop::collection::vec((-6i64..=6, 1i64..=40), 0..=6).prop_map(move |v| {
        let cs = v.into_iter().enumerate().map(|(i, (d, a))| ChordRecord::new(format!("c{i}"), d, q(a, 4))).collect();
        ChordSpectrum::new(n, q(11, 1), cs).unwrap()
    })
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn euler_characteristic_of_complexes(a in prop::collection::vec(-3i64..=3, 6), b in prop::collection::vec(-3i64..=3, 2)) {
        // ∂₂ = column b, ∂₁ = a 3x2 block chosen so ∂₁∂₂ = 0: ∂₁ = a·(b₁, −b₀).
        let d2 = IntegerMatrix::from_i64(2, 1, &b);
        let d1: Vec<i64> = (0..3).flat_map(|i| [a[i] * b[1], -a[i] * b[0]]).collect();
        let d1 = IntegerMatrix::from_i64(3, 2, &d1);
        let counts = BTreeMap::from([(0, 3), (1, 2), (2, 1)]);
        let c = ChainComplex::new(counts, BTreeMap::from([(1, d1), (2, d2)])).unwrap();
        let chi: i64 = (0..=2).map(|k| if k % 2 == 0 { 1 } else { -1 } * c.count(k) as i64).sum();
        prop_assert_eq!(c.homology().euler_characteristic(), chi);
    }

    #[test]
    fn presentations(p in arb_presentation()) {
        let n = p.n() as i64;
        let h = p.homology();
        prop_assert!(h.support().iter().all(|&k| k <= n));
        let chi: i64 = p.handles().iter().map(|x| if x.index % 2 == 0 { 1 } else { -1 }).sum();
        prop_assert_eq!(h.euler_characteristic(), chi);
        let y = weinstein::boundary_homology(&p).unwrap();
        let top = p.dim() as i64 - 1;
        for k in 0..=top {
            prop_assert_eq!(y.rational_dim(k), y.rational_dim(top - k));
        }
        let chi_y: i64 = (0..=top).map(|k| if k % 2 == 0 { 1 } else { -1 } * y.rational_dim(k) as i64).sum();
        prop_assert_eq!(chi_y, if top % 2 == 0 { 2 * chi } else { 0 });
        let coh = p.cohomology();
        for k in 0..=n - 2 {
            prop_assert_eq!(coh.homology_dim(k, Coefficients::Q).unwrap(), y.rational_dim(k));
        }
    }

    #[test]
    fn connect_sum_laws((a, b, c) in three_presentations()) {
        let sum = |x: &HandlePresentation, y: &HandlePresentation| weinstein::boundary_connect_sum(x, y).unwrap();
        prop_assert_eq!(sum(&a, &b).homology(), sum(&b, &a).homology());
        prop_assert_eq!(sum(&sum(&a, &b), &c).homology(), sum(&a, &sum(&b, &c)).homology());
        prop_assert_eq!(sum(&a, &HandlePresentation::ball(a.n())), a.clone());
    }

    #[test]
    fn sh_plus_round_trip(g in arb_group(), n in 5i64..=7) {
        let p = floer::sh_plus_from_vanishing(&g, n, true).unwrap();
        prop_assert_eq!(floer::cohomology_from_sh_plus(&p), g.clone());
        prop_assert!(
            matches!(floer::flexible_support_test(&p.support(), n), FillingVerdict::Inconclusive { .. }),
            "support {:?}", p.support()
        );
    }

    #[test]
    fn distinguisher_symmetry(a in arb_group(), b in arb_group()) {
        let ab = floer::distinguish_flexible_fillings(&a, &b, 5).unwrap();
        let ba = floer::distinguish_flexible_fillings(&b, &a, 5).unwrap();
        prop_assert_eq!(ab.is_distinct(), ba.is_distinct());
        prop_assert!(!floer::distinguish_flexible_fillings(&a, &a, 5).unwrap().is_distinct());
    }

    #[test]
    fn loops_never_separate_equal_tables(dims in prop::collection::btree_map(0i64..=8, 0usize..=20, 0..=8),
                                        hy in prop::collection::btree_map(0i64..=12, 0usize..=3, 0..=6)) {
        let t = LoopHomologyTable { horizon: (0, 8), dims, base: BTreeMap::new() };
        let v = floer::boundedinfinite_distinguisher(&t, &t, &hy, 5).unwrap();
        prop_assert!(!v.verdict.is_distinct());
    }

    #[test]
    fn stabilization_is_additive(s in arb_spectrum(4), n1 in 0u64..=3, n2 in 0u64..=3) {
        let qd = chords::choose_q(4).unwrap();
        let eps = q(1, 1);
        let once = chords::stabilize(&s, n1 + n2, &qd, &eps, None).unwrap();
        let old = |x: &ChordSpectrum| -> BTreeMap<String, i64> {
            x.chords.iter().filter(|c| s.chords.iter().any(|o| o.id == c.id)).map(|c| (c.id.clone(), c.degree)).collect()
        };
        // Second round only on the old chords, so new ids do not collide.
        let first = chords::stabilize(&s, n1, &qd, &eps, None).unwrap();
        let first_old = ChordSpectrum::new(4, s.bound.clone(), first.chords.iter().filter(|c| s.chords.iter().any(|o| o.id == c.id)).cloned().collect()).unwrap();
        let twice = chords::stabilize(&first_old, n2, &qd, &eps, None).unwrap();
        prop_assert_eq!(old(&once), old(&twice));
        prop_assert_eq!(once.chords.len(), s.chords.len() + 2 * (n1 + n2) as usize * 4 * s.chords.len());
        let actions: Vec<_> = once.chords.iter().take(s.chords.len()).map(|c| c.action.clone()).collect();
        prop_assert_eq!(actions, s.chords.iter().map(|c| c.action.clone()).collect::<Vec<_>>());
    }

    #[test]
    fn self_intersection_vanishing(n in 3i64..=10, big_n in 0i64..=6, chi_half in -3i64..=3, orientable: bool) {
        let chi = 2 * chi_half;
        let indices: Vec<u32> = if chi >= 0 { vec![0; chi as usize] } else { vec![1; (-chi) as usize] };
        let m = MorseData::new("Q", (n - 2) as u32, chi, orientable, indices).unwrap();
        let i = chords::self_intersection_index(n, big_n, &m).unwrap();
        let expected = if n % 2 == 0 && orientable { big_n * chi == 0 } else { (big_n * chi) % 2 == 0 };
        prop_assert_eq!(i.is_zero(), expected);
    }

    #[test]
    fn front_round_trip(down in 0u32..=12, up in 0u32..=12, index in 0u32..=8) {
        let d = chords::chord_degree(down as i64, up as i64, index as i64).unwrap();
        let mut c = ChordRecord::new("c", d, q(1, 1));
        c.front = Some(FrontData { down, up, index });
        prop_assert!(c.validate().is_ok());
        c.degree += 1;
        prop_assert!(c.validate().is_err());
    }

    #[test]
    fn canonical_rotation_is_idempotent(w in prop::collection::vec(0u8..4, 1..8), r in 0usize..8) {
        let c = canonical_rotation(&w);
        prop_assert_eq!(canonical_rotation(&c), c.clone());
        let k = r % w.len();
        let rotated = [&w[k..], &w[..k]].concat();
        prop_assert_eq!(canonical_rotation(&rotated), c);
    }

    #[test]
    fn rescale_composes(s in 1i64..=9, t in 1i64..=9, d in 1i64..=5) {
        let y = OrbitSpectrum::new(4, q(10, 1), vec![OrbitRecord::old(d, q(7, 3))]).unwrap();
        let (s, t) = (q(s, 3), q(t, 5));
        prop_assert_eq!(y.rescale(&s).unwrap().rescale(&t).unwrap(), y.rescale(&(&s * &t)).unwrap());
        prop_assert_eq!(y.rescale(&s).unwrap().orbits[0].degree, d);
    }

    #[test]
    fn pipeline_with_negative_chords(n in 3u32..=5, degrees in prop::collection::vec(-4i64..=4, 0..=3), extra in 1i64..=8) {
        let target = q(4, 1);
        let bound = &target + q(extra, 2);
        let cs = degrees.iter().enumerate().map(|(i, &d)| ChordRecord::new(format!("x{i}"), d, &target * q(3 + i as i64, 12))).collect();
        let spectrum = ChordSpectrum::new(n, bound.clone(), cs).unwrap();
        let c = AdcCertificate {
            n,
            stages: vec![Stage { scale: BigRational::one(), bound, orbits: vec![OrbitRecord::old(1, q(1, 2))] }],
        };
        let (out, notes) = surgery::flexible_surgery_certificate(&c, &[spectrum.clone()]).unwrap();
        prop_assert!(surgery::adc_check(&out).pass);
        prop_assert_eq!(notes[0].stabilization, chords::min_positive_n(&spectrum.restrict(&target)));
        for o in &out.stages[0].orbits {
            if let OrbitOrigin::Word { letters } = &o.origin {
                prop_assert!(o.degree >= letters.len() as i64 + n as i64 - 3);
            }
        }
    }
}

#[test]
fn ex_not_nice_shape() {
    let mut h = GradedGroup::free(&[(0, 1)]);
    h.set(2, AbelianGroup::free(1));
    let p = floer::sh_plus_from_vanishing(&h, 2, true).unwrap();
    assert!(matches!(floer::adc_homological_obstruction(&p).unwrap(), AdcVerdict::NotAdc { witness_degree: 1, .. }));
    assert!(p.support().contains(&1));
}
