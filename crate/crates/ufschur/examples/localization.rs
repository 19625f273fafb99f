//! Localization: the values of `Q^L_(1) * Q^L_(2)` at the type C fixed
//! points, the GKM divisibility check, and the greedy re-expansion in the
//! `Q^L` basis. The window is as large as the truncation, so every basis
//! function that can occur below it is seen.

use ufschur::combinat::RootType;
use ufschur::fgl::FglContext;
use ufschur::localization::{basis_function, expand_family, gkm_check, joint_vars, localize, recombine, Window};

fn main() -> ufschur::Result<()> {
    let ctx = FglContext::universal(4);
    let w = Window::new(RootType::C, 2, 4)?;
    let a = basis_function(&[1], &w, &ctx)?;
    let b = basis_function(&[2], &w, &ctx)?;
    let vars = joint_vars(&a, &b)?;
    let f = a.relabel(&vars, Some)?.mul(&b.relabel(&vars, Some)?)?;

    let fam = localize(&f, &w, &ctx)?;
    for (mu, v) in &fam.points {
        println!("phi_{mu:?} = {v}");
    }
    let r = gkm_check(&fam, &ctx)?;
    println!("GKM: passed {} ({} pairs, {} leave the window)", r.passed, r.pairs_checked, r.pairs_skipped);

    let e = expand_family(&fam, &ctx)?;
    println!("greedy expansion in {} steps, residual zero: {}", e.steps, e.residual_zero);
    for (nu, c) in &e.expansion.entries {
        println!("  Q_{nu:?}: {}", c.as_series().map(|s| s.to_string()).unwrap_or_default());
    }
    println!("recombines to the product: {}", recombine(&e, &w, &ctx)? == f);
    Ok(())
}
