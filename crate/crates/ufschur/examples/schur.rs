//! Universal factorial Schur functions: `Q^L_(1)` in one variable, a
//! two-variable `P^L` with symbolic `b`, `s^L` and its double version, and
//! the supersymmetry test.

use ufschur::combinat::{Partition, StrictPartition};
use ufschur::fgl::FglContext;
use ufschur::uschur::{check_supersymmetric, p_l, q_l, s_l, s_l_double, BMode};

fn main() -> ufschur::Result<()> {
    let ctx = FglContext::universal(4);
    let one = StrictPartition::new(vec![1])?;
    println!("Q_(1)(x1 | b) = {}", q_l(&one, 1, BMode::Symbolic(1), &ctx)?);
    println!("P_(1)(x1 | b) = {}", p_l(&one, 1, BMode::Symbolic(1), &ctx)?);

    let lam = StrictPartition::new(vec![2, 1])?;
    let p = p_l(&lam, 2, BMode::Symbolic(2), &ctx)?;
    println!("P_(2,1)(x1, x2 | b) has {} terms up to degree {}", p.len(), p.trunc());

    let q = q_l(&StrictPartition::new(vec![2])?, 3, BMode::Symbolic(2), &ctx)?;
    let r = check_supersymmetric(&q, &ctx, true)?;
    println!("Q_(2) in 3 variables: supersymmetric {}, divisible by t+t {:?}", r.supersymmetric, r.gamma_plus);

    let mu = Partition::new(vec![1])?;
    println!("s_(1)(x1, x2 | b) = {}", s_l(&mu, 2, BMode::Symbolic(2), &ctx.with_trunc(2))?);
    println!("s_(1)(x1, x2 || b) = {}", s_l_double(&mu, 2, &ctx.with_trunc(2))?);
    Ok(())
}
