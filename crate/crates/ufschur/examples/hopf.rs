//! Hopf structure: the coproduct of `Q^L_(2)`, and the product
//! `phat_(1) * phat_(1)` expanded in the `phat` basis; the two sets of
//! structure constants agree.

use ufschur::combinat::StrictPartition;
use ufschur::duals::{coproduct_schur, dual_phat, max_strict_len, pair_label, product_in_basis};
use ufschur::fgl::FglContext;
use ufschur::sympoly::Basis;

fn main() -> ufschur::Result<()> {
    let ctx = FglContext::universal(4);
    let n = max_strict_len(4);
    let two = StrictPartition::new(vec![2])?;
    let cop = coproduct_schur(&two, n, n, false, &ctx)?;
    println!("coproduct of Q_(2):");
    for (label, c) in &cop.entries {
        println!("  {label:?}: {}", c.as_ring().map(|r| r.to_string()).unwrap_or_default());
    }

    let one = StrictPartition::new(vec![1])?;
    let f = dual_phat(&one, &ctx)?.mul(&dual_phat(&one, &ctx)?)?;
    let prod = product_in_basis(&f, Basis::PHat, &ctx)?;
    println!("phat_(1)^2 in the phat basis:");
    for (label, c) in &prod.entries {
        println!("  {label:?}: {}", c.as_ring().map(|r| r.to_string()).unwrap_or_default());
    }
    let q2 = prod.ring(&[2]);
    println!("coefficient of phat_(2) matches <Delta Q_(2), Q_(1) x Q_(1)>: {}", q2 == cop.ring(&pair_label(&[1], &[1])));
    Ok(())
}
