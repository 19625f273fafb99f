//! Dual functions: the one-row generators `qhat_k`, `phat_k`, their
//! expansions in complete symmetric functions, and the full dual bases
//! extracted from the Cauchy kernel.

use ufschur::combinat::StrictPartition;
use ufschur::duals::{dual_phat, dual_qhat, phat_list, qhat_list};
use ufschur::fgl::FglContext;
use ufschur::series::Family;
use ufschur::sympoly::expand_in_h;

fn main() -> ufschur::Result<()> {
    let ctx = FglContext::universal(4);
    let q = qhat_list(4, &ctx)?;
    let p = phat_list(4, &ctx)?;
    for k in 1..=3 {
        println!("qhat_{k} = {}", expand_in_h(&q[k], Family::Y, 4)?);
        println!("phat_{k} = {}", expand_in_h(&p[k], Family::Y, 4)?);
    }
    for parts in [vec![2, 1], vec![3]] {
        let lam = StrictPartition::new(parts)?;
        println!("dual of Q_{lam}: {}", expand_in_h(&dual_phat(&lam, &ctx)?, Family::Y, 4)?);
        println!("dual of P_{lam}: {}", expand_in_h(&dual_qhat(&lam, &ctx)?, Family::Y, 4)?);
    }
    Ok(())
}
