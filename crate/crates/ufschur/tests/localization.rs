use ufschur::combinat::RootType;
use ufschur::fgl::FglContext;
use ufschur::lazard::Specialization;
use ufschur::localization::{basis_function, expand_greedy, gkm_check, injectivity_proxy, joint_vars, localize, recombine, Window};
use ufschur::series::{Family, TruncSeries};
use ufschur::Int;

fn product(a: &[u32], b: &[u32], w: &Window, ctx: &FglContext) -> TruncSeries {
    let f = basis_function(a, w, ctx).unwrap();
    let g = basis_function(b, w, ctx).unwrap();
    let vars = joint_vars(&f, &g).unwrap();
    f.relabel(&vars, Some).unwrap().mul(&g.relabel(&vars, Some).unwrap()).unwrap()
}

/// Constant term of a coefficient, i.e. its value at b = 0.
fn at_b_zero(s: &TruncSeries) -> Int {
    assert!(s.vars().vars().iter().all(|v| v.fam == Family::B));
    s.constant_term().constant_term()
}

#[test]
fn additive_q2_q1() {
    let ctx = FglContext::new(3, Specialization::Additive).unwrap();
    let w = Window::new(RootType::C, 2, 3).unwrap();
    let e = expand_greedy(&product(&[2], &[1], &w, &ctx), &w, &ctx).unwrap();
    assert!(e.residual_zero);
    for (nu, c) in &e.expansion.entries {
        let c0 = at_b_zero(c.as_series().unwrap());
        let want = match nu.as_slice() {
            [3] => Int::from(2),
            [2, 1] => Int::from(1),
            _ => Int::ZERO,
        };
        assert_eq!(c0, want, "coefficient of Q_{nu:?}");
    }
}

#[test]
fn type_d_gkm_and_roundtrip() {
    let ctx = FglContext::universal(4);
    let w = Window::new(RootType::D, 4, 4).unwrap();
    let f = product(&[1], &[2], &w, &ctx);
    let fam = localize(&f, &w, &ctx).unwrap();
    assert!(gkm_check(&fam, &ctx).unwrap().passed);
    let e = expand_greedy(&f, &w, &ctx).unwrap();
    assert!(e.residual_zero);
    assert_eq!(recombine(&e, &w, &ctx).unwrap(), f);
}

#[test]
fn injectivity_proxy_needs_a_large_enough_window() {
    let ctx = FglContext::universal(4);
    let big = Window::new(RootType::C, 2, 3).unwrap();
    let f = basis_function(&[3], &big, &ctx).unwrap();
    assert!(injectivity_proxy(&f, &big, &ctx).unwrap());
    // every label of the smaller window misses (3), so all values vanish
    let small = Window::new(RootType::C, 2, 2).unwrap();
    assert!(!injectivity_proxy(&f, &small, &ctx).unwrap());
}

#[test]
fn greedy_products_type_a() {
    let ctx = FglContext::universal(4);
    let w = Window::new(RootType::A, 2, 4).unwrap();
    for (a, b) in [(vec![], vec![]), (vec![1], vec![1]), (vec![1, 1], vec![2])] {
        let f = product(&a, &b, &w, &ctx);
        let e = expand_greedy(&f, &w, &ctx).unwrap();
        assert!(e.residual_zero, "{a:?} * {b:?}");
        assert_eq!(recombine(&e, &w, &ctx).unwrap(), f, "{a:?} * {b:?}");
    }
}
