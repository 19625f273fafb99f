//! Formal group law arithmetic: the universal law, its inverse and
//! 2-series, and the same under the additive and multiplicative presets.

use ufschur::fgl::FglContext;
use ufschur::lazard::{Beta, Specialization};
use ufschur::series::{TruncSeries, Var, VarSet};

fn main() -> ufschur::Result<()> {
    let trunc = 5;
    let one = VarSet::standard(1, 0, 0, false)?;
    let x = TruncSeries::var(&one, trunc, Var::x(1))?;

    let ctx = FglContext::universal(trunc);
    println!("i(x)   = {}", ctx.formal_inverse(&x)?);
    println!("[2](x) = {}", ctx.n_series(2, &x)?);

    let two = VarSet::standard(2, 0, 0, false)?;
    let u = TruncSeries::var(&two, 4, Var::x(1))?;
    let v = TruncSeries::var(&two, 4, Var::x(2))?;
    println!("F(x1, x2) = {}", ctx.with_trunc(4).formal_sum(&u, &v)?);

    // F(x, i(x)) vanishes identically
    let z = ctx.formal_sum(&x, &ctx.formal_inverse(&x)?)?;
    println!("F(x, i(x)) is zero: {}", z.is_zero());

    for spec in [Specialization::Additive, Specialization::Multiplicative(Beta::Symbolic), Specialization::Multiplicative(Beta::Int(1))] {
        let c = FglContext::new(trunc, spec.clone())?;
        println!("{spec:?}: i(x) = {}", c.formal_inverse(&x)?);
    }
    Ok(())
}
