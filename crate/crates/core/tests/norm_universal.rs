use altkit_core::alternator::{self, AlternatorInstance};
use altkit_core::norm::{
    self, free_case_check, power_sum_generation_check, traceexp_check, trace_formula_check, well_definedness_check,
    FamilyInstance, NormMap, PowerSumExpr,
};
use altkit_core::random::{case_rng, PolyBounds, Sample};
use altkit_core::ring::{AlgebraMap, CoeffRing, FiniteFreeAlgebra, PolyRing, Ring, Scalar};
use altkit_core::span::Localization;
use altkit_core::tensor::TensorSpace;
use altkit_core::Error;

fn q(v: i64) -> Scalar {
    Scalar::from(v)
}

fn sqrt2() -> FiniteFreeAlgebra<CoeffRing> {
    let s = vec![vec![vec![q(1), q(0)], vec![q(0), q(1)]], vec![vec![q(0), q(1)], vec![q(2), q(0)]]];
    FiniteFreeAlgebra::new(CoeffRing::Rationals, 2, s, vec![q(1), q(0)]).unwrap()
}

fn split() -> FiniteFreeAlgebra<CoeffRing> {
    let s = vec![vec![vec![q(1), q(0)], vec![q(0), q(0)]], vec![vec![q(0), q(0)], vec![q(0), q(1)]]];
    FiniteFreeAlgebra::new(CoeffRing::Rationals, 2, s, vec![q(1), q(1)]).unwrap()
}

fn family(e: &FiniteFreeAlgebra<CoeffRing>, image: Vec<Scalar>, x: &[&str]) -> FamilyInstance<CoeffRing> {
    let r = PolyRing::univariate(CoeffRing::Rationals);
    let map = AlgebraMap::new(r.clone(), e.clone(), vec![image]).unwrap();
    FamilyInstance::new(map, x.iter().map(|s| r.parse(s).unwrap()).collect()).unwrap()
}

fn small_context(n: usize, seed: u64, case: u64) -> Localization<PolyRing> {
    let space = TensorSpace::new(PolyRing::univariate(CoeffRing::Rationals), n).unwrap();
    (0..)
        .find_map(|attempt| {
            let mut rng = case_rng(seed, "norm-x", case * 1000 + attempt);
            let x = alternator::random_tuple(&space, &mut rng, PolyBounds { max_terms: 2, max_degree: 2 });
            Localization::new(AlternatorInstance::new(space.clone(), x).unwrap()).ok()
        })
        .unwrap()
}

#[test]
fn sqrt2_discriminant_and_structure_constants() {
    let e = sqrt2();
    // Trace form in the basis (1, √2): Tr 1 = 2, Tr √2 = 0, Tr 2 = 4.
    assert_eq!(norm::discriminant(&e, &[e.basis(0), e.basis(1)]).unwrap(), q(2 * 4 - 0));
    let nm = NormMap::new(family(&e, e.basis(1), &["1", "t"])).unwrap();
    assert_eq!(nm.alpha_sq_value(), q(8));
    let report = nm.verify_pullback().unwrap();
    assert!(report.witness.holds(), "{:?}", report.witness);
    assert_eq!(report.mapped[1][1], vec![q(2), q(0)]);
    assert!(nm.table_agrees().unwrap().holds());
}

#[test]
fn reordered_basis_still_pulls_back() {
    let e = sqrt2();
    let nm = NormMap::new(family(&e, e.basis(1), &["t", "1"])).unwrap();
    assert_eq!(nm.alpha_sq_value(), q(8));
    let report = nm.verify_pullback().unwrap();
    assert!(report.witness.holds());
    // In the basis (√2, 1): √2·√2 = 0·√2 + 2·1.
    assert_eq!(report.mapped[0][0], vec![q(0), q(2)]);
}

#[test]
fn split_algebra_is_etale_with_unit_discriminant() {
    let e = split();
    // t ↦ (0, 1), so f(1) = (1, 1) and f(t) = (0, 1).
    let inst = family(&e, vec![q(0), q(1)], &["1", "t"]);
    assert_eq!(inst.discriminant(), &q(1));
    let nm = NormMap::new(inst).unwrap();
    assert!(nm.verify_pullback().unwrap().witness.holds());
    let report = free_case_check(&e, &[e.basis(0), e.basis(1)], &[e.basis(0), e.basis(1), vec![q(2), q(-1)], vec![q(3), q(5)]]).unwrap();
    assert_eq!(report.discriminant, q(1));
    assert!(report.witness.holds());
}

#[test]
fn free_case_on_sqrt2() {
    let e = sqrt2();
    let mut rng = case_rng(5, "free", 0);
    let samples: Vec<Vec<Scalar>> = (0..8).map(|_| e.sample(&mut rng, PolyBounds::default())).collect();
    let report = free_case_check(&e, &[e.basis(0), e.basis(1)], &samples).unwrap();
    assert_eq!(report.discriminant, q(8));
    assert!(report.witness.holds());
}

#[test]
fn norm_map_is_well_defined() {
    let e = sqrt2();
    let nm = NormMap::new(family(&e, e.basis(1), &["1", "t"])).unwrap();
    let loc = Localization::new(nm.instance().source_instance().unwrap()).unwrap();
    let r = loc.instance().factor().clone();
    for case in 0..20 {
        let mut rng = case_rng(6, "well-defined", case);
        let z = r.sample(&mut rng, PolyBounds::default());
        assert!(well_definedness_check(&nm, &loc, &z).unwrap().holds());
        // 𝔭(z) ↦ Tr(f(z)) with f(t) = √2: Tr(a + b√2) = 2a.
        let direct = nm.apply(&PowerSumExpr::power_sum(loc.space(), z.clone())).unwrap();
        let fz = nm.instance().map().apply(&z);
        assert_eq!(direct, q(2).mul(&fz[0]));
    }
}

#[test]
fn non_etale_family_is_rejected() {
    let b = PolyRing::new(CoeffRing::Rationals, &["s"]);
    let p = |src: &str| b.parse(src).unwrap();
    let e = FiniteFreeAlgebra::new(
        b.clone(),
        2,
        vec![vec![vec![p("1"), p("0")], vec![p("0"), p("1")]], vec![vec![p("0"), p("1")], vec![p("s"), p("0")]]],
        vec![p("1"), p("0")],
    )
    .unwrap();
    let r = PolyRing::univariate(CoeffRing::Rationals);
    let map = AlgebraMap::new(r.clone(), e.clone(), vec![e.basis(1)]).unwrap();
    let inst = FamilyInstance::new(map, vec![r.one(), r.parse("t").unwrap()]).unwrap();
    assert!(matches!(NormMap::new(inst), Err(Error::NotEtale(_))));
}

#[test]
fn traceexp_holds_on_seeded_cases() {
    for n in [2, 3] {
        let space = TensorSpace::new(PolyRing::univariate(CoeffRing::Rationals), n).unwrap();
        for case in 0..100 {
            let mut rng = case_rng(8, "traceexp", case);
            let x = alternator::random_tuple(&space, &mut rng, PolyBounds::default());
            let y = alternator::random_tuple(&space, &mut rng, PolyBounds::default());
            assert!(traceexp_check(&space, &x, &y).unwrap().holds(), "n = {n} case {case}");
        }
    }
}

#[test]
fn trace_formula_holds_on_seeded_cases() {
    for n in [2, 3] {
        for ctx in 0..4 {
            let loc = small_context(n, 9, ctx);
            let alg = loc.structure_algebra().unwrap();
            let r = loc.instance().factor().clone();
            for case in 0..25 {
                let mut rng = case_rng(9, "trace-z", ctx * 100 + case);
                let z = r.sample(&mut rng, PolyBounds::default());
                assert!(trace_formula_check(&loc, &alg, &z).unwrap().holds(), "n = {n} ctx {ctx} case {case}");
            }
        }
    }
}

#[test]
fn trace_of_t_golden() {
    let space = TensorSpace::new(PolyRing::univariate(CoeffRing::Rationals), 2).unwrap();
    let r = space.factor().clone();
    let t = r.parse("t").unwrap();
    let loc = Localization::new(AlternatorInstance::new(space.clone(), vec![r.one(), t.clone()]).unwrap()).unwrap();
    let alg = loc.structure_algebra().unwrap();
    let tr = alg.trace(&loc.coordinates(&t));
    let num = loc.numerator_at(&tr, 1).unwrap();
    assert_eq!(space.format(&num), "1*[1|t^3] - 1*[t|t^2] - 1*[t^2|t] + 1*[t^3|1]");
    // (1⊗t + t⊗1)·α²(1, t), multiplied out independently.
    assert_eq!(num, space.mul(&space.polarized_power_sum(&t), loc.instance().alpha_sq()));
}

#[test]
fn symmetric_tensors_have_power_sum_presentations() {
    for n in [2, 3] {
        let loc = small_context(n, 10, 0);
        for case in 0..20 {
            let mut rng = case_rng(10, "presentation", case);
            let y = alternator::random_symmetric(loc.space(), &mut rng, PolyBounds { max_terms: 2, max_degree: 2 });
            let (expr, w) = power_sum_generation_check(&loc, &y).unwrap();
            assert!(w.holds());
            assert_eq!(expr.exponent, 1);
        }
        let not_sym = loc.space().pure(&loc.instance().x().to_vec()).unwrap();
        if !loc.space().is_symmetric(&not_sym) {
            assert!(matches!(power_sum_generation_check(&loc, &not_sym), Err(Error::NotSymmetric)));
        }
    }
}
