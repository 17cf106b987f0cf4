use g2lab::curvature::{decompose, kn_product, phi_product, random_algebraic_curvature, ric_w};
use g2lab::exterior::dimension;
use g2lab::g2::{lambda3, proj, sym2_from_27, IrredLabel};
use g2lab::linalg::Mat;
use g2lab::torsion::{extract_torsion, recompose, TorsionComponents};
use g2lab::{standard_phi, Form, Sym2Tensor};
use proptest::prelude::*;

fn form(k: usize) -> impl Strategy<Value = Form<f64>> {
    prop::collection::vec(-2.0..2.0f64, dimension(k)).prop_map(move |c| Form::new(k, c).unwrap())
}

fn symmetric() -> impl Strategy<Value = Sym2Tensor<f64>> {
    prop::collection::vec(-2.0..2.0f64, 49)
        .prop_map(|v| Sym2Tensor::symmetrize(&Mat::from_fn(7, 7, |i, j| v[7 * i + j])))
}

fn torsion() -> impl Strategy<Value = TorsionComponents<f64>> {
    (-2.0..2.0f64, form(1), form(2), form(3))
        .prop_map(|(t0, t1, t2, t3)| TorsionComponents::new(t0, t1, proj(&t2, 14), proj(&t3, 27)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wedge_is_graded_commutative(a in form(2), b in form(3)) {
        let gap = (&a.wedge(&b) - &b.wedge(&a)).max_abs();
        prop_assert!(gap < 1e-12);
        let c = Form::<f64>::covector(2);
        let gap = (&c.wedge(&b) + &b.wedge(&c)).max_abs();
        prop_assert!(gap < 1e-12);
    }

    #[test]
    fn wedge_is_associative(a in form(1), b in form(2), c in form(2)) {
        let gap = (&a.wedge(&b).wedge(&c) - &a.wedge(&b.wedge(&c))).max_abs();
        prop_assert!(gap < 1e-12);
    }

    #[test]
    fn hodge_is_an_isometry(a in form(3), b in form(3)) {
        prop_assert!((a.hodge().inner(&b.hodge()) - a.inner(&b)).abs() < 1e-12);
        prop_assert!((a.wedge(&b.hodge()).top_or_scalar() - a.inner(&b)).abs() < 1e-12);
    }

    #[test]
    fn projections_split_forms(a in form(3)) {
        let mut sum = Form::zero(3);
        for label in IrredLabel::of_degree(3) {
            sum += &proj(&a, label.dim());
        }
        prop_assert!((&sum - &a).max_abs() < 1e-12);
        let p27 = proj(&a, 27);
        let back = lambda3(&sym2_from_27(&p27).unwrap());
        prop_assert!((&back - &p27).max_abs() < 1e-12);
    }

    #[test]
    fn lambda3_norm(h in symmetric()) {
        let h0 = h.traceless();
        prop_assert!((lambda3(&h0).norm2() - 2.0 * h0.norm2()).abs() < 1e-10);
    }

    #[test]
    fn kulkarni_nomizu_constants(h in symmetric()) {
        let h0 = h.traceless();
        let n = h0.norm2();
        prop_assert!((kn_product(&h0).norm2() - 20.0 * n).abs() < 1e-10 * n.max(1.0));
        prop_assert!((phi_product(&h0).norm2() - 92.0 / 3.0 * n).abs() < 1e-10 * n.max(1.0));
    }

    #[test]
    fn torsion_round_trip(t in torsion()) {
        let (dphi, dpsi) = recompose(&t).unwrap();
        let back = extract_torsion(&standard_phi(), &dphi, &dpsi).unwrap();
        prop_assert!(back.distance(&t) < 1e-10);
    }

    #[test]
    fn ric_w_lives_in_the_w27_block(seed in 0u64..10_000) {
        let r = random_algebraic_curvature(seed);
        let d = decompose(&r).unwrap();
        prop_assert!((&ric_w(&d.w27) - &ric_w(&r)).max_abs() < 1e-12);
        let others = d.w77.add(&d.w64).add(&d.traceless_ricci_part).add(&d.scalar_part);
        prop_assert!(ric_w(&others).max_abs() < 1e-12);
    }
}
