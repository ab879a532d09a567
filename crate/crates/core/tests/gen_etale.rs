use altkit_core::alternator::{self, AlternatorInstance};
use altkit_core::blowup::{
    canonical_generators, diagonal_support_probe, free_case_plus_check, is_generically_etale, to_localized,
    Annihilator, BPlus, NormMapPlus, ReesAlgebra,
};
use altkit_core::norm::{FamilyInstance, NormMap, PowerSumExpr};
use altkit_core::random::{case_rng, PolyBounds, Sample};
use altkit_core::ring::{AlgebraMap, CoeffRing, FiniteFreeAlgebra, MultiPoly, PolyRing, Ring, Scalar};
use altkit_core::span::Localization;
use altkit_core::tensor::TensorSpace;
use altkit_core::Error;
use rand::Rng as _;

fn q(v: i64) -> Scalar {
    Scalar::from(v)
}

/// `E = ℚ[s][t]/(t² − s)` over `B = ℚ[s]`, with `A[t] → E` sending `t` to `t`.
fn t2_minus_s() -> (PolyRing, FamilyInstance<PolyRing>) {
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
    (r, inst)
}

fn sqrt2_family() -> FamilyInstance<CoeffRing> {
    let s = vec![vec![vec![q(1), q(0)], vec![q(0), q(1)]], vec![vec![q(0), q(1)], vec![q(2), q(0)]]];
    let e = FiniteFreeAlgebra::new(CoeffRing::Rationals, 2, s, vec![q(1), q(0)]).unwrap();
    let r = PolyRing::univariate(CoeffRing::Rationals);
    let map = AlgebraMap::new(r.clone(), e.clone(), vec![e.basis(1)]).unwrap();
    FamilyInstance::new(map, vec![r.one(), r.parse("t").unwrap()]).unwrap()
}

fn parse_all(r: &PolyRing, xs: &[&str]) -> Vec<MultiPoly> {
    xs.iter().map(|s| r.parse(s).unwrap()).collect()
}

#[test]
fn t2_minus_s_is_generically_etale_only() {
    let (_, inst) = t2_minus_s();
    assert!(!inst.is_etale());
    assert!(inst.is_generically_etale());
    assert!(is_generically_etale(inst.algebra(), inst.fx()).unwrap());
    assert!(matches!(NormMap::new(inst), Err(Error::NotEtale(_))));
}

#[test]
fn t2_minus_s_generator_images() {
    let (r, inst) = t2_minus_s();
    let b = inst.base().clone();
    let plus = NormMapPlus::new(inst.clone()).unwrap();
    let rees = ReesAlgebra::new(inst.source_instance().unwrap());
    // det(Tr) for ((t, t²), (1, t)) is det[[0, 2s], [2s, 0]] = −4s², and d_E = 4s.
    let g = rees.generator(parse_all(&r, &["t", "t^2"]), parse_all(&r, &["1", "t"])).unwrap();
    assert_eq!(b.format(&plus.apply(&rees, &g).unwrap()), "-s");
    let report = plus.verify_pullback_plus().unwrap();
    assert!(report.witness.holds());
    assert_eq!(report.mapped[1][1], vec![b.parse("s").unwrap(), b.zero()]);
    assert_eq!(report.expected[1][1], vec![b.parse("s").unwrap(), b.zero()]);
}

#[test]
fn mapped_constants_rebuild_products() {
    let (r, inst) = t2_minus_s();
    let plus = NormMapPlus::new(inst.clone()).unwrap();
    let report = plus.verify_pullback_plus().unwrap();
    let e = inst.algebra();
    let x = inst.x();
    for i in 0..2 {
        for j in 0..2 {
            let lhs = (0..2).fold(e.zero(), |acc, k| e.add(&acc, &e.scale(&report.mapped[i][j][k], &inst.fx()[k])));
            let rhs = inst.map().apply(&r.mul(&x[i], &x[j]));
            assert!(e.equal(&lhs, &rhs), "i = {i}, j = {j}");
        }
    }
}

#[test]
fn norm_plus_is_multiplicative_and_sends_coefficients_to_traces() {
    let (r, inst) = t2_minus_s();
    let b = inst.base().clone();
    let plus = NormMapPlus::new(inst.clone()).unwrap();
    let rees = ReesAlgebra::new(inst.source_instance().unwrap());
    let space = rees.instance().space().clone();
    let t2 = r.parse("t^2").unwrap();
    // 𝔭(t²) ↦ Tr(s) = 2s.
    let c = rees.constant(space.polarized_power_sum(&t2)).unwrap();
    assert_eq!(b.format(&plus.apply(&rees, &c).unwrap()), "2*s");
    for case in 0..10 {
        let mut rng = case_rng(3, "rees-mul", case);
        let gen = |rng: &mut _| {
            let y = alternator::random_tuple(&space, rng, PolyBounds { max_terms: 2, max_degree: 3 });
            let z = alternator::random_tuple(&space, rng, PolyBounds { max_terms: 2, max_degree: 3 });
            rees.generator(y, z).unwrap()
        };
        let (g, h) = (gen(&mut rng), gen(&mut rng));
        let prod = rees.mul(&g, &h).unwrap();
        let sum = rees.add(&g, &rees.mul(&c, &h).unwrap()).unwrap();
        let (ig, ih) = (plus.apply(&rees, &g).unwrap(), plus.apply(&rees, &h).unwrap());
        assert_eq!(plus.apply(&rees, &prod).unwrap(), b.mul(&ig, &ih));
        let ic = b.parse("2*s").unwrap();
        assert_eq!(plus.apply(&rees, &sum).unwrap(), b.add(&ig, &b.mul(&ic, &ih)));
    }
}

#[test]
fn norm_plus_agrees_with_norm_on_etale_families() {
    let inst = sqrt2_family();
    let nm = NormMap::new(inst.clone()).unwrap();
    let plus = NormMapPlus::new(inst.clone()).unwrap();
    let src = inst.source_instance().unwrap();
    let space = src.space().clone();
    for case in 0..20 {
        let mut rng = case_rng(4, "agree", case);
        let y = alternator::random_tuple(&space, &mut rng, PolyBounds::default());
        let z = alternator::random_tuple(&space, &mut rng, PolyBounds::default());
        let via_norm = nm.apply(&PowerSumExpr::pair(&space, y.clone(), z.clone(), 1)).unwrap();
        assert_eq!(plus.generator_image(&y, &z).unwrap(), via_norm);
    }
    assert!(plus.verify_pullback_plus().unwrap().witness.holds());
}

#[test]
fn rees_arithmetic_matches_localized_arithmetic() {
    let space = TensorSpace::new(PolyRing::univariate(CoeffRing::Rationals), 2).unwrap();
    let r = space.factor().clone();
    let inst = AlternatorInstance::new(space.clone(), parse_all(&r, &["1", "t"])).unwrap();
    let rees = ReesAlgebra::new(inst.clone());
    let loc = Localization::new(inst).unwrap();
    let small = PolyBounds { max_terms: 2, max_degree: 2 };
    for case in 0..20 {
        let mut rng = case_rng(5, "rees", case);
        let g = rees
            .generator(alternator::random_tuple(&space, &mut rng, small), alternator::random_tuple(&space, &mut rng, small))
            .unwrap();
        let c = rees.constant(alternator::random_symmetric(&space, &mut rng, small)).unwrap();
        let h = rees.mul(&c, &rees.mul(&g, &g).unwrap()).unwrap();
        let (lg, lh) = (to_localized(&rees, &loc, &g).unwrap(), to_localized(&rees, &loc, &h).unwrap());
        let sum = rees.add(&g, &h).unwrap();
        assert_eq!(sum.exponent, 2);
        assert!(loc.equal(&to_localized(&rees, &loc, &sum).unwrap(), &loc.add(&lg, &lh)));
        let prod = rees.mul(&g, &h).unwrap();
        assert!(loc.equal(&to_localized(&rees, &loc, &prod).unwrap(), &loc.mul(&lg, &lh)));
        assert!(rees.equal_in_a(&rees.add(&g, &rees.neg(&g)).unwrap(), &rees.zero()).unwrap());
    }
    let x = rees.instance().x().to_vec();
    assert!(rees.equal_in_a(&rees.generator(x.clone(), x).unwrap(), &rees.one()).unwrap());
}

#[test]
fn rees_errors() {
    let space = TensorSpace::new(PolyRing::univariate(CoeffRing::Rationals), 2).unwrap();
    let r = space.factor().clone();
    let x = parse_all(&r, &["1", "t"]);
    let one = ReesAlgebra::new(AlternatorInstance::new(space.clone(), x.clone()).unwrap());
    let two = ReesAlgebra::new(AlternatorInstance::new(space.clone(), x.clone()).unwrap());
    assert_eq!(one.add(&one.one(), &two.one()).map(|_| ()), Err(Error::ContextMismatch));
    assert!(matches!(one.generator(vec![r.one()], x.clone()), Err(Error::ArityMismatch { .. })));
    let gens = canonical_generators(one.instance(), &[(x.clone(), parse_all(&r, &["t", "t^2"]))]).unwrap();
    assert_eq!(gens.len(), 2);
    assert_eq!(&gens[0], one.instance().alpha_sq());
    assert!(gens.iter().all(|g| space.is_symmetric(g)));
    assert!(matches!(canonical_generators(one.instance(), &[(x, vec![r.one()])]), Err(Error::ArityMismatch { .. })));

    let f = FiniteFreeAlgebra::new(
        CoeffRing::Rationals,
        2,
        vec![vec![vec![q(1), q(0)], vec![q(0), q(1)]], vec![vec![q(0), q(1)], vec![q(0), q(0)]]],
        vec![q(1), q(0)],
    )
    .unwrap();
    let fs = TensorSpace::new(f.clone(), 2).unwrap();
    let finite = ReesAlgebra::new(AlternatorInstance::new(fs, vec![f.basis(0), f.basis(1)]).unwrap());
    assert!(matches!(finite.equal_in_a(&finite.one(), &finite.one()), Err(Error::UnsupportedAmbient(_))));
}

/// `𝔽₅[u]/(u³ − u²)` in the basis (1, u, u²).
fn cusp_line() -> FiniteFreeAlgebra<CoeffRing> {
    let v = |a: i64, b: i64, c: i64| vec![q(a), q(b), q(c)];
    let s = vec![
        vec![v(1, 0, 0), v(0, 1, 0), v(0, 0, 1)],
        vec![v(0, 1, 0), v(0, 0, 1), v(0, 0, 1)],
        vec![v(0, 0, 1), v(0, 0, 1), v(0, 0, 1)],
    ];
    FiniteFreeAlgebra::new(CoeffRing::prime_field(5).unwrap(), 3, s, v(1, 0, 0)).unwrap()
}

#[test]
fn saturation_over_a_finite_algebra_is_evaluation_at_one() {
    let b = cusp_line();
    let f5 = CoeffRing::prime_field(5).unwrap();
    let u = b.basis(1);
    let bp = BPlus::new(b.clone(), u.clone()).unwrap();
    assert!(matches!(bp.kernel(), Annihilator::Span(rows) if rows.len() == 2));
    // ker(B → B_u) is the u²-torsion {b : b(1) = 0}, so B₊ ≅ 𝔽₅ by b ↦ b(1).
    let at_one = |e: &[Scalar]| e.iter().fold(Scalar::ZERO, |acc, c| f5.add(&acc, c));
    for case in 0..30 {
        let mut rng = case_rng(6, "cusp", case);
        let a = b.sample(&mut rng, PolyBounds::default());
        let c = b.sample(&mut rng, PolyBounds::default());
        assert_eq!(bp.equal(&a, &c), at_one(&a) == at_one(&c));
        let quotient = bp.divide_by_d(&b.mul(&a, &u)).unwrap();
        assert_eq!(at_one(&quotient), at_one(&a));
    }
    let nil = BPlus::new(b.clone(), b.sub(&u, &b.basis(2))).unwrap();
    assert!(nil.is_zero_ring());
    assert_eq!(BPlus::new(b.clone(), b.one()).unwrap().kernel(), &Annihilator::Zero);
    assert!(matches!(
        BPlus::new(FiniteFreeAlgebra::new(CoeffRing::Integers, 1, vec![vec![vec![q(1)]]], vec![q(1)]).unwrap(), vec![q(2)]),
        Err(Error::UnsupportedBase(_))
    ));
}

#[test]
fn free_case_plus_on_split_and_sqrt2() {
    let inst = sqrt2_family();
    let e = inst.algebra();
    let split = FiniteFreeAlgebra::new(
        CoeffRing::Rationals,
        2,
        vec![vec![vec![q(1), q(0)], vec![q(0), q(0)]], vec![vec![q(0), q(0)], vec![q(0), q(1)]]],
        vec![q(1), q(1)],
    )
    .unwrap();
    for alg in [e.clone(), split] {
        let mut rng = case_rng(7, "free-plus", 0);
        let pairs: Vec<_> = (0..5)
            .map(|_| {
                let mut tuple = || (0..2).map(|_| alg.sample(&mut rng, PolyBounds::default())).collect::<Vec<_>>();
                (tuple(), tuple())
            })
            .collect();
        let w = free_case_plus_check(&alg, &[alg.basis(0), alg.basis(1)], &pairs).unwrap();
        assert!(w.holds(), "{w:?}");
    }
}

#[test]
fn free_case_plus_over_a_polynomial_base() {
    let (_, inst) = t2_minus_s();
    let e = inst.algebra();
    let b = inst.base();
    let mut rng = case_rng(8, "free-poly", 0);
    let pairs: Vec<_> = (0..4)
        .map(|_| {
            let mut tuple = || {
                (0..2)
                    .map(|_| vec![b.sample(&mut rng, PolyBounds { max_terms: 2, max_degree: 2 }), b.sample(&mut rng, PolyBounds { max_terms: 2, max_degree: 2 })])
                    .collect::<Vec<_>>()
            };
            (tuple(), tuple())
        })
        .collect();
    assert!(free_case_plus_check(e, &[e.basis(0), e.basis(1)], &pairs).unwrap().holds());
}

#[test]
fn distinct_points_are_off_the_diagonal() {
    for coeffs in [CoeffRing::Rationals, CoeffRing::prime_field(11).unwrap()] {
        for (n, k) in [(2, 1), (3, 1), (2, 2), (3, 2)] {
            let names: Vec<String> = (0..k).map(|i| format!("t{}", i + 1)).collect();
            let ring = PolyRing::new(coeffs.clone(), &names);
            let mut found = 0;
            for case in 0..200u64 {
                if found == 50 {
                    break;
                }
                let mut rng = case_rng(9, "probe", case);
                let points: Vec<Vec<Scalar>> =
                    (0..n).map(|_| (0..k).map(|_| q(rng.gen_range(0..11))).collect()).collect();
                let distinct = (0..n).all(|i| (0..i).all(|j| points[i] != points[j]));
                if !distinct {
                    continue;
                }
                found += 1;
                let res = diagonal_support_probe(&ring, &points, None).unwrap();
                assert!(!res.on_diagonal, "{points:?}");
                if k == 1 {
                    // The only monomial n-set is (1, t, …, t^{n−1}): a squared Vandermonde.
                    let c = &coeffs;
                    let mut v = Scalar::ONE;
                    for i in 0..n {
                        for j in 0..i {
                            let diff = c.sub(&points[i][0], &points[j][0]);
                            v = c.mul(&v, &c.mul(&diff, &diff));
                        }
                    }
                    assert_eq!(res.witness.unwrap().1, c.coerce(&v).unwrap());
                }
                let mut repeated = points.clone();
                repeated[n - 1] = repeated[0].clone();
                assert!(diagonal_support_probe(&ring, &repeated, None).unwrap().on_diagonal);
            }
            assert_eq!(found, 50);
        }
    }
}

#[test]
fn probe_checks_point_dimensions() {
    let ring = PolyRing::new(CoeffRing::Rationals, &["a", "b"]);
    assert!(matches!(
        diagonal_support_probe(&ring, &[vec![q(1), q(2)], vec![q(3)]], None),
        Err(Error::ArityMismatch { expected: 2, got: 1 })
    ));
}
