use proptest::prelude::*;
use ufschur::combinat::StrictPartition;
use ufschur::fgl::FglContext;
use ufschur::lazard::{a_gen, Beta, CoeffPoly, Specialization};
use ufschur::series::{TruncSeries, Var, VarSet};
use ufschur::uschur::{check_supersymmetric, drop_x, onto, p_l, q_l, BMode};
use ufschur::Int;

fn ring_elt() -> impl Strategy<Value = CoeffPoly> {
    prop::collection::vec((-3i64..=3, 0u32..3, 0u32..2), 1..4).prop_map(|v| {
        v.into_iter().fold(CoeffPoly::zero(), |acc, (c, e1, e2)| {
            acc.add(&a_gen(1, 1).unwrap().pow(e1).mul(&a_gen(1, 2).unwrap().pow(e2)).int_scale(c))
        })
    })
}

fn series(trunc: u32) -> impl Strategy<Value = TruncSeries> {
    prop::collection::vec((0u32..3, 0u32..3, ring_elt()), 0..6).prop_map(move |terms| {
        let vars = VarSet::standard(2, 0, 0, false).unwrap();
        let x1 = TruncSeries::var(&vars, trunc, Var::x(1)).unwrap();
        let x2 = TruncSeries::var(&vars, trunc, Var::x(2)).unwrap();
        terms.into_iter().fold(TruncSeries::zero(&vars, trunc), |acc, (i, j, c)| {
            acc.add(&x1.pow(i).mul(&x2.pow(j)).unwrap().scale(&c)).unwrap()
        })
    })
}

fn no_constant(s: TruncSeries) -> TruncSeries {
    s.filter(|m| m.degree() > 0)
}

fn strict(max: u32) -> impl Strategy<Value = StrictPartition> {
    prop::collection::btree_set(1u32..=max, 1..=2)
        .prop_map(|s| StrictPartition::new(s.into_iter().rev().collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ring_axioms(a in series(4), b in series(4), c in series(4)) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().mul(&c).unwrap(), a.mul(&c).unwrap().add(&b.mul(&c).unwrap()).unwrap());
    }

    #[test]
    fn division_undoes_multiplication(a in series(4), u in series(4)) {
        // a unit times x1 + x2 is a divisor with an integer leading coefficient
        let vars = a.vars().clone();
        let lin = TruncSeries::var(&vars, 4, Var::x(1)).unwrap().add(&TruncSeries::var(&vars, 4, Var::x(2)).unwrap()).unwrap();
        let unit = TruncSeries::one(&vars, 4).add(&no_constant(u)).unwrap();
        let d = lin.mul(&unit).unwrap();
        let p = a.mul(&d).unwrap();
        prop_assert_eq!(p.exact_div(&d).unwrap(), a.truncate(3));
    }

    #[test]
    fn group_law_axioms(u in series(4), v in series(4)) {
        let ctx = FglContext::universal(4);
        let (u, v) = (no_constant(u), no_constant(v));
        prop_assert_eq!(ctx.formal_sum(&u, &v).unwrap(), ctx.formal_sum(&v, &u).unwrap());
        let zero = TruncSeries::zero(u.vars(), 4);
        prop_assert_eq!(ctx.formal_sum(&u, &zero).unwrap(), u.clone());
        prop_assert!(ctx.formal_sum(&u, &ctx.formal_inverse(&u).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn n_series_adds(n in 1i64..4, m in 1i64..4, beta in -2i64..3) {
        for spec in [Specialization::Universal, Specialization::Multiplicative(Beta::Int(beta))] {
            let ctx = FglContext::new(5, spec).unwrap();
            let vars = VarSet::standard(1, 0, 0, false).unwrap();
            let t = TruncSeries::var(&vars, 5, Var::x(1)).unwrap();
            let lhs = ctx.formal_sum(&ctx.n_series(n, &t).unwrap(), &ctx.n_series(m, &t).unwrap()).unwrap();
            prop_assert_eq!(lhs, ctx.n_series(n + m, &t).unwrap());
        }
    }

    #[test]
    fn supersymmetry(lam in strict(3)) {
        let ctx = FglContext::universal(4);
        let m = lam.part(1) as usize + 1;
        let p = p_l(&lam, 3, BMode::Symbolic(m), &ctx).unwrap();
        prop_assert!(check_supersymmetric(&p, &ctx, false).unwrap().supersymmetric);
        let q = q_l(&lam, 3, BMode::Symbolic(m), &ctx).unwrap();
        let r = check_supersymmetric(&q, &ctx, true).unwrap();
        prop_assert!(r.supersymmetric && r.gamma_plus == Some(true));
    }

    #[test]
    fn q_stability(lam in strict(3)) {
        let ctx = FglContext::universal(4);
        let b = BMode::Symbolic(lam.part(1) as usize);
        let big = drop_x(&q_l(&lam, 3, b, &ctx).unwrap(), 2).unwrap();
        if lam.len() > 2 {
            prop_assert!(big.is_zero());
        } else {
            let small = q_l(&lam, 2, b, &ctx).unwrap();
            prop_assert_eq!(&big, &onto(&small, big.vars()).unwrap());
        }
    }

    #[test]
    fn specialization_is_a_ring_map(a in ring_elt(), b in ring_elt(), beta in -3i64..4) {
        for spec in [Specialization::Additive, Specialization::Multiplicative(Beta::Int(beta)), Specialization::KTheory(Beta::Symbolic)] {
            prop_assert_eq!(a.mul(&b).specialize(&spec), a.specialize(&spec).mul(&b.specialize(&spec)));
            prop_assert_eq!(a.add(&b).specialize(&spec), a.specialize(&spec).add(&b.specialize(&spec)));
        }
    }

    #[test]
    fn series_json_roundtrip(a in series(4)) {
        prop_assert_eq!(TruncSeries::from_json(&a.to_json()).unwrap(), a);
    }
}

#[test]
fn universal_law_is_associative() {
    let ctx = FglContext::universal(6);
    let vars = VarSet::standard(3, 0, 0, false).unwrap();
    let x: Vec<TruncSeries> = (1..=3).map(|i| TruncSeries::var(&vars, 6, Var::x(i)).unwrap()).collect();
    let left = ctx.formal_sum(&ctx.formal_sum(&x[0], &x[1]).unwrap(), &x[2]).unwrap();
    let right = ctx.formal_sum(&x[0], &ctx.formal_sum(&x[1], &x[2]).unwrap()).unwrap();
    assert_eq!(left, right);
    assert_eq!(Int::from(2), ctx.n_series_coeffs(2)[1].constant_term());
}
