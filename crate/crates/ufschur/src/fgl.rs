//! Formal group law calculus over the (specialized) Lazard ring.
//!
//! One-variable series such as the formal inverse and the n-series are
//! computed once per context as coefficient lists and then composed into
//! arbitrary series. Two-variable templates (`X + Y` under the group law,
//! `X - Y`, the unit `(X - Y)/(X - Y)_F`) are computed once per truncation
//! and relabeled onto the variables where they are needed.

use crate::error::{Error, Result};
use crate::int::Int;
use crate::lazard::{a_table, CoeffPoly, Specialization};
use crate::series::{TruncSeries, Var, VarSet};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

/// Truncation degree and specialization for group-law computations.
#[derive(Clone, Debug, PartialEq)]
pub struct FglContext {
    pub trunc: u32,
    pub spec: Specialization,
}

/// Coefficients `c_0, c_1, ...` of a one-variable series.
pub type UPoly = Vec<CoeffPoly>;

fn up_mul(a: &UPoly, b: &UPoly, n: usize) -> UPoly {
    let mut out = vec![CoeffPoly::zero(); n + 1];
    for (i, x) in a.iter().enumerate().take(n + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            if !y.is_zero() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
    }
    out
}

fn up_add(a: &UPoly, b: &UPoly) -> UPoly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| {
            let z = CoeffPoly::zero();
            a.get(k).unwrap_or(&z).add(b.get(k).unwrap_or(&z))
        })
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Template {
    Sum,
    SumInv,
    Inverse,
    /// `u = (X - Y)_F / (X - Y)`, a unit.
    Unit,
    /// `u^{-1}`.
    UnitInv,
    /// `(X + Y)_F / u`.
    SumOverUnit,
}

type Cache<K, V> = OnceLock<Mutex<HashMap<K, V>>>;

static UPOLY_CACHE: Cache<(String, u32, i64), Arc<UPoly>> = OnceLock::new();
static TEMPLATE_CACHE: Cache<(String, u32, Template), Arc<TruncSeries>> = OnceLock::new();

fn cached<K: std::hash::Hash + Eq + Clone, V: Clone>(
    cache: &'static Cache<K, V>,
    key: K,
    make: impl FnOnce() -> Result<V>,
) -> Result<V> {
    let m = cache.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = m.lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let v = make()?;
    m.lock().unwrap().insert(key, v.clone());
    Ok(v)
}

impl FglContext {
    pub fn new(trunc: u32, spec: Specialization) -> Result<FglContext> {
        if trunc == 0 {
            return Err(Error::Argument("truncation must be at least 1".into()));
        }
        Ok(FglContext { trunc, spec })
    }

    pub fn universal(trunc: u32) -> FglContext {
        FglContext { trunc, spec: Specialization::Universal }
    }

    pub fn with_trunc(&self, trunc: u32) -> FglContext {
        FglContext { trunc, spec: self.spec.clone() }
    }

    /// Specialized `a_{i,j}`, indexed `[i][j]` for `i + j <= trunc`.
    pub fn coeffs(&self) -> Vec<Vec<CoeffPoly>> {
        let n = self.trunc as usize;
        let table = a_table(self.trunc.max(2));
        let mut out = vec![vec![CoeffPoly::zero(); n + 1]; n + 1];
        for i in 1..n {
            for j in 1..=n - i {
                out[i][j] = table.get(i as u32, j as u32).specialize(&self.spec);
            }
        }
        out
    }

    /// `F(u, v)` on one-variable coefficient lists.
    fn up_sum(&self, u: &UPoly, v: &UPoly) -> UPoly {
        let n = self.trunc as usize;
        let a = self.coeffs();
        let mut out = up_add(u, v);
        out.resize(n + 1, CoeffPoly::zero());
        let mut upow = vec![vec![CoeffPoly::one()]];
        let mut vpow = vec![vec![CoeffPoly::one()]];
        for k in 1..n {
            upow.push(up_mul(&upow[k - 1], u, n));
            vpow.push(up_mul(&vpow[k - 1], v, n));
        }
        for i in 1..n {
            for j in 1..=n - i {
                if a[i][j].is_zero() {
                    continue;
                }
                let p = up_mul(&upow[i], &vpow[j], n);
                for (k, c) in p.iter().enumerate() {
                    if !c.is_zero() {
                        out[k] = out[k].add(&c.mul(&a[i][j]));
                    }
                }
            }
        }
        out
    }

    fn up_var(&self) -> UPoly {
        let mut v = vec![CoeffPoly::zero(); self.trunc as usize + 1];
        v[1] = CoeffPoly::one();
        v
    }

    /// Coefficients of the formal inverse `i(X)`.
    pub fn inverse_coeffs(&self) -> Arc<UPoly> {
        cached(&UPOLY_CACHE, (self.spec.key(), self.trunc, i64::MIN), || {
            let n = self.trunc as usize;
            let x = self.up_var();
            let mut inv = vec![CoeffPoly::zero(); n + 1];
            inv[1] = CoeffPoly::constant(-1);
            // The degree-d coefficient of F(X, i(X)) is c_d plus terms in c_{<d}.
            for d in 2..=n {
                let f = self.with_trunc(d as u32).up_sum(&x[..=d].to_vec(), &inv[..=d].to_vec());
                inv[d] = f[d].neg();
            }
            Ok(Arc::new(inv))
        })
        .unwrap()
    }

    /// Coefficients of the n-series `[n](X)`.
    pub fn n_series_coeffs(&self, n: i64) -> Arc<UPoly> {
        cached(&UPOLY_CACHE, (self.spec.key(), self.trunc, n), || {
            let len = self.trunc as usize + 1;
            let out = match n {
                0 => vec![CoeffPoly::zero(); len],
                1 => self.up_var(),
                n if n > 1 => {
                    let prev = self.n_series_coeffs(n - 1);
                    self.up_sum(&prev, &self.up_var())
                }
                n => {
                    let pos = self.n_series_coeffs(-n);
                    let inv = self.inverse_coeffs();
                    up_compose(&pos, &inv, self.trunc as usize)
                }
            };
            Ok(Arc::new(out))
        })
        .unwrap()
    }

    /// `F(u, v)` for series with zero constant term.
    pub fn formal_sum(&self, u: &TruncSeries, v: &TruncSeries) -> Result<TruncSeries> {
        for s in [u, v] {
            if !s.constant_term().is_zero() {
                return Err(Error::Argument("formal sum needs zero constant terms".into()));
            }
        }
        let n = u.trunc();
        let ctx = self.with_trunc(n);
        let a = ctx.coeffs();
        let mut vpow = vec![TruncSeries::one(u.vars(), n)];
        for k in 1..n as usize {
            vpow.push(vpow[k - 1].mul(v)?);
        }
        let mut out = u.add(v)?;
        // sum_i u^i (sum_j a_ij v^j), in Horner form over i.
        let mut acc = TruncSeries::zero(u.vars(), n);
        for i in (1..n as usize).rev() {
            let mut w = TruncSeries::zero(u.vars(), n);
            for j in 1..=n as usize - i {
                if !a[i][j].is_zero() {
                    w = w.add(&vpow[j].scale(&a[i][j]))?;
                }
            }
            acc = acc.add(&w)?.mul(u)?;
        }
        out = out.add(&acc)?;
        Ok(out)
    }

    /// `i(t)` for a series with zero constant term.
    pub fn formal_inverse(&self, t: &TruncSeries) -> Result<TruncSeries> {
        compose(&self.with_trunc(t.trunc()).inverse_coeffs(), t)
    }

    /// `u - v` under the group law, i.e. `F(u, i(v))`.
    pub fn formal_diff(&self, u: &TruncSeries, v: &TruncSeries) -> Result<TruncSeries> {
        self.formal_sum(u, &self.formal_inverse(v)?)
    }

    pub fn n_series(&self, n: i64, t: &TruncSeries) -> Result<TruncSeries> {
        compose(&self.with_trunc(t.trunc()).n_series_coeffs(n), t)
    }

    /// Two-variable template over `{x1, x2}` at truncation `trunc`.
    fn template(&self, kind: Template, trunc: u32) -> Result<Arc<TruncSeries>> {
        let ctx = self.with_trunc(trunc);
        cached(&TEMPLATE_CACHE, (self.spec.key(), trunc, kind), || {
            let vs = VarSet::standard(2, 0, 0, false)?;
            let x = TruncSeries::var(&vs, trunc, Var::x(1))?;
            let y = TruncSeries::var(&vs, trunc, Var::x(2))?;
            let s = match kind {
                Template::Sum => ctx.formal_sum(&x, &y)?,
                Template::Inverse => ctx.formal_inverse(&x)?,
                Template::SumInv => ctx.formal_diff(&x, &y)?,
                Template::Unit => {
                    // (X - Y)_F / (X - Y) at one degree higher, then trimmed.
                    let up = ctx.with_trunc(trunc + 1);
                    let big = (*up.template(Template::SumInv, trunc + 1)?).clone();
                    big.exact_div_linear(Var::x(1), Var::x(2))?
                }
                Template::UnitInv => ctx.template(Template::Unit, trunc)?.invert_unit()?,
                Template::SumOverUnit => {
                    let s = ctx.template(Template::Sum, trunc)?;
                    s.mul(&*ctx.template(Template::UnitInv, trunc)?)?
                }
            };
            Ok(Arc::new(s))
        })
    }

    fn place(&self, kind: Template, target: &Arc<VarSet>, trunc: u32, v: Var, w: Option<Var>) -> Result<TruncSeries> {
        let t = self.template(kind, trunc)?;
        t.relabel(target, |u| if u == Var::x(1) { Some(v) } else { w })
    }

    /// `v + w` under the group law, for two declared variables.
    pub fn sum_vars(&self, target: &Arc<VarSet>, trunc: u32, v: Var, w: Var) -> Result<TruncSeries> {
        self.place(Template::Sum, target, trunc, v, Some(w))
    }

    /// `v - w` under the group law.
    pub fn diff_vars(&self, target: &Arc<VarSet>, trunc: u32, v: Var, w: Var) -> Result<TruncSeries> {
        self.place(Template::SumInv, target, trunc, v, Some(w))
    }

    /// The formal inverse of a declared variable.
    pub fn inverse_var(&self, target: &Arc<VarSet>, trunc: u32, v: Var) -> Result<TruncSeries> {
        self.place(Template::Inverse, target, trunc, v, None)
    }

    /// The unit `u(v, w) = (v - w)_F / (v - w)`.
    pub fn unit_vars(&self, target: &Arc<VarSet>, trunc: u32, v: Var, w: Var) -> Result<TruncSeries> {
        self.place(Template::Unit, target, trunc, v, Some(w))
    }

    /// `u(v, w)^{-1}`.
    pub fn unit_inv_vars(&self, target: &Arc<VarSet>, trunc: u32, v: Var, w: Var) -> Result<TruncSeries> {
        self.place(Template::UnitInv, target, trunc, v, Some(w))
    }

    /// `(v + w)_F / u(v, w)`, so that `(v+w)_F/(v-w)_F = this / (v - w)`.
    pub fn sum_over_unit_vars(&self, target: &Arc<VarSet>, trunc: u32, v: Var, w: Var) -> Result<TruncSeries> {
        self.place(Template::SumOverUnit, target, trunc, v, Some(w))
    }

    /// `[t|b]^k = prod_{i<=k} (t + b_i)`, or `[[t|b]]^k = (t + t)[t|b]^{k-1}`
    /// when `doubled`; both are 1 for `k = 0`. Uses `b_1, ..., b_k`.
    pub fn fact_power(&self, t: &TruncSeries, k: i64, doubled: bool) -> Result<TruncSeries> {
        if k < 0 {
            return Err(Error::Argument(format!("factorial power exponent {k} is negative")));
        }
        let mut acc = TruncSeries::one(t.vars(), t.trunc());
        if k == 0 {
            return Ok(acc);
        }
        let plain = if doubled {
            acc = self.n_series(2, t)?;
            k - 1
        } else {
            k
        };
        for i in 1..=plain {
            let b = TruncSeries::var(t.vars(), t.trunc(), Var::b(i as i32))?;
            acc = acc.mul(&self.formal_sum(t, &b)?)?;
        }
        Ok(acc)
    }

    /// Same as [`fact_power`](Self::fact_power) for a declared variable,
    /// built from cached templates; `b` lists the parameters in order.
    pub fn fact_power_var(&self, target: &Arc<VarSet>, trunc: u32, v: Var, b: &[Var], doubled: bool) -> Result<TruncSeries> {
        let mut acc = TruncSeries::one(target, trunc);
        if b.is_empty() && !doubled {
            return Ok(acc);
        }
        let mut rest = b;
        if doubled {
            let x = TruncSeries::var(target, trunc, v)?;
            acc = self.n_series(2, &x)?;
            rest = &b[..b.len().saturating_sub(1)];
        }
        for &bi in rest {
            acc = acc.mul(&self.sum_vars(target, trunc, v, bi)?)?;
        }
        Ok(acc)
    }
}

/// `sum c_k s^k` truncated, for `c_0 = 0`.
pub fn up_compose(c: &UPoly, inner: &UPoly, n: usize) -> UPoly {
    let mut acc: UPoly = vec![CoeffPoly::zero(); n + 1];
    for k in (1..c.len().min(n + 1)).rev() {
        acc = up_mul(&acc, inner, n);
        acc[0] = acc[0].add(&c[k]);
    }
    up_mul(&acc, inner, n)
}

/// `sum c_k s^k` for a series `s` with zero constant term.
pub fn compose(c: &UPoly, s: &TruncSeries) -> Result<TruncSeries> {
    if !s.constant_term().is_zero() {
        return Err(Error::Substitution("composition needs a zero constant term".into()));
    }
    let n = s.trunc();
    let mut acc = TruncSeries::zero(s.vars(), n);
    for k in (1..c.len().min(n as usize + 1)).rev() {
        acc = acc.add(&TruncSeries::constant(s.vars(), n, &c[k]))?.mul(s)?;
    }
    Ok(acc)
}

/// A polynomial in abstract generators `z_1, z_2, ...` with Lazard-ring
/// coefficients; keys are exponent vectors indexed from `z_1`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct GenPoly {
    pub terms: BTreeMap<Vec<u32>, CoeffPoly>,
}

impl GenPoly {
    pub fn zero() -> GenPoly {
        GenPoly::default()
    }

    pub fn constant(c: CoeffPoly) -> GenPoly {
        let mut g = GenPoly::zero();
        if !c.is_zero() {
            g.terms.insert(Vec::new(), c);
        }
        g
    }

    pub fn gen(i: usize) -> GenPoly {
        let mut e = vec![0; i];
        e[i - 1] = 1;
        let mut g = GenPoly::zero();
        g.terms.insert(e, CoeffPoly::one());
        g
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn trim(mut e: Vec<u32>) -> Vec<u32> {
        while e.last() == Some(&0) {
            e.pop();
        }
        e
    }

    fn insert_add(&mut self, e: Vec<u32>, c: CoeffPoly) {
        let e = GenPoly::trim(e);
        let cur = self.terms.remove(&e).unwrap_or_default();
        let s = cur.add(&c);
        if !s.is_zero() {
            self.terms.insert(e, s);
        }
    }

    pub fn add(&self, o: &GenPoly) -> GenPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.insert_add(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &GenPoly) -> GenPoly {
        self.add(&o.scale(&CoeffPoly::constant(-1)))
    }

    pub fn scale(&self, k: &CoeffPoly) -> GenPoly {
        let mut out = GenPoly::zero();
        for (e, c) in &self.terms {
            out.insert_add(e.clone(), c.mul(k));
        }
        out
    }

    pub fn mul(&self, o: &GenPoly) -> GenPoly {
        let mut out = GenPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let n = e1.len().max(e2.len());
                let e: Vec<u32> = (0..n)
                    .map(|k| e1.get(k).copied().unwrap_or(0) + e2.get(k).copied().unwrap_or(0))
                    .collect();
                out.insert_add(e, c1.mul(c2));
            }
        }
        out
    }

    pub fn exact_div_int(&self, k: &Int) -> Result<GenPoly> {
        let mut out = GenPoly::zero();
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c.exact_div_int(k)?);
        }
        Ok(out)
    }

    pub fn specialize(&self, spec: &Specialization) -> GenPoly {
        let mut out = GenPoly::zero();
        for (e, c) in &self.terms {
            out.insert_add(e.clone(), c.specialize(spec));
        }
        out
    }

    /// Highest generator index that occurs.
    pub fn max_gen(&self) -> usize {
        self.terms.keys().map(|e| e.len()).max().unwrap_or(0)
    }

    /// Replaces `z_i` by `value`.
    pub fn substitute(&self, i: usize, value: &GenPoly) -> GenPoly {
        let mut out = GenPoly::zero();
        for (e, c) in &self.terms {
            let p = e.get(i - 1).copied().unwrap_or(0);
            let mut rest = e.clone();
            if p > 0 {
                rest[i - 1] = 0;
            }
            let mut t = GenPoly::zero();
            t.insert_add(rest, c.clone());
            for _ in 0..p {
                t = t.mul(value);
            }
            out = out.add(&t);
        }
        out
    }

    /// Evaluates with `z_i` set to `vals[i-1]` (series of a common shape).
    pub fn eval(&self, vals: &[TruncSeries]) -> Result<TruncSeries> {
        let first = vals.first().ok_or_else(|| Error::Argument("no values supplied".into()))?;
        let mut acc = TruncSeries::zero(first.vars(), first.trunc());
        for (e, c) in &self.terms {
            if e.len() > vals.len() {
                return Err(Error::Argument(format!("generator z_{} has no value", e.len())));
            }
            let mut t = TruncSeries::constant(first.vars(), first.trunc(), c);
            for (k, &p) in e.iter().enumerate() {
                if p > 0 {
                    t = t.mul(&vals[k].pow(p))?;
                }
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }
}

impl std::fmt::Display for GenPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &p)| p > 0)
                    .map(|(k, &p)| if p == 1 { format!("z{}", k + 1) } else { format!("z{}^{p}", k + 1) })
                    .collect();
                if mono.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{}", mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Coefficients `c_0..c_n` in `T` of a series over `GenPoly`.
type GSeries = Vec<GenPoly>;

fn gs_mul(a: &GSeries, b: &GSeries, n: usize) -> GSeries {
    let mut out = vec![GenPoly::zero(); n + 1];
    for i in 0..=n.min(a.len() - 1) {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..=(n - i).min(b.len() - 1) {
            if !b[j].is_zero() {
                out[i + j] = out[i + j].add(&a[i].mul(&b[j]));
            }
        }
    }
    out
}

fn gs_from(u: &UPoly) -> GSeries {
    u.iter().map(|c| GenPoly::constant(c.clone())).collect()
}

/// Coefficients in `T` of `(1 + [2](T) p(T)) (1 + [2](i(T)) p(i(T))) - 1`,
/// `p(T) = sum_{i>=1} z_i T^{i-1}`, up to degree `n`.
pub fn phat_relation(ctx: &FglContext, n: usize) -> Vec<GenPoly> {
    let c = ctx.with_trunc(n as u32 + 1);
    let two = gs_from(&c.n_series_coeffs(2));
    let inv = gs_from(&c.inverse_coeffs());
    let mut p: GSeries = vec![GenPoly::zero(); n + 1];
    for i in 1..=n + 1 {
        if i - 1 <= n {
            p[i - 1] = GenPoly::gen(i);
        }
    }
    // p(i(T)) = sum z_i i(T)^{i-1}
    let mut pbar: GSeries = vec![GenPoly::zero(); n + 1];
    let mut ipow: GSeries = vec![GenPoly::zero(); n + 1];
    ipow[0] = GenPoly::constant(CoeffPoly::one());
    for i in 1..=n + 1 {
        for k in 0..=n {
            pbar[k] = pbar[k].add(&ipow[k].mul(&GenPoly::gen(i)));
        }
        ipow = gs_mul(&ipow, &inv, n);
    }
    // [2](i(T)) = [-2](T)
    let mtwo = gs_from(&c.n_series_coeffs(-2));
    let mut left = gs_mul(&two, &p, n);
    let mut right = gs_mul(&mtwo, &pbar, n);
    left[0] = left[0].add(&GenPoly::constant(CoeffPoly::one()));
    right[0] = right[0].add(&GenPoly::constant(CoeffPoly::one()));
    let mut prod = gs_mul(&left, &right, n);
    prod[0] = prod[0].sub(&GenPoly::constant(CoeffPoly::one()));
    prod
}

/// Solves the degree-`2k` relation for `z_{2k}` in terms of odd `z_i`, after
/// replacing lower even generators by their own solutions.
pub fn eliminate_even_phat(k: usize, ctx: &FglContext) -> Result<GenPoly> {
    if k == 0 {
        return Err(Error::Argument("k must be at least 1".into()));
    }
    let rel = phat_relation(ctx, 2 * k);
    let mut evens: Vec<GenPoly> = Vec::with_capacity(k);
    for j in 1..=k {
        let mut r = rel[2 * j].clone();
        for (i, e) in evens.iter().enumerate().rev() {
            r = r.substitute(2 * (i + 1), e);
        }
        let z = GenPoly::gen(2 * j);
        let lead = r.terms.get(&GenPoly::trim(z.terms.keys().next().unwrap().clone()));
        if lead != Some(&CoeffPoly::constant(4)) {
            return Err(Error::Internal(format!(
                "relation in degree {} has coefficient {:?} on z_{}",
                2 * j,
                lead.map(|c| c.to_string()),
                2 * j
            )));
        }
        let rest = r.sub(&z.scale(&CoeffPoly::constant(4)));
        evens.push(rest.scale(&CoeffPoly::constant(-1)).exact_div_int(&Int::from(4))?);
    }
    Ok(evens.pop().expect("k >= 1"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lazard::{a_gen, Beta};

    fn a(i: u32, j: u32) -> CoeffPoly {
        a_gen(i, j).unwrap()
    }

    #[test]
    fn inverse_low_terms() {
        let ctx = FglContext::universal(5);
        let inv = ctx.inverse_coeffs();
        assert_eq!(inv[1], CoeffPoly::constant(-1));
        assert_eq!(inv[2], a(1, 1));
        assert_eq!(inv[3], a(1, 1).pow(2).neg());
        let c4 = a(1, 1).pow(3).add(&a(1, 1).mul(&a(1, 2))).add(&a(1, 3).int_scale(2)).sub(&a(2, 2));
        assert_eq!(inv[4], c4);
    }

    #[test]
    fn two_series() {
        let ctx = FglContext::universal(5);
        let two = ctx.n_series_coeffs(2);
        assert_eq!(two[1], CoeffPoly::constant(2));
        assert_eq!(two[2], a(1, 1));
        assert_eq!(two[3], a(1, 2).int_scale(2));
        assert_eq!(two[4], a(1, 3).int_scale(2).add(&a(2, 2)));
        assert_eq!(two[5], a(1, 4).int_scale(2).add(&a(2, 3).int_scale(2)));
    }

    #[test]
    fn unit_template_has_constant_one() {
        let ctx = FglContext::universal(4);
        let u = ctx.template(Template::Unit, 4).unwrap();
        assert_eq!(u.constant_term(), CoeffPoly::one());
        let vs = VarSet::standard(2, 0, 0, false).unwrap();
        let x = TruncSeries::var(&vs, 4, Var::x(1)).unwrap();
        let y = TruncSeries::var(&vs, 4, Var::x(2)).unwrap();
        let lhs = x.sub(&y).unwrap().mul(&u).unwrap();
        assert_eq!(lhs, ctx.formal_diff(&x, &y).unwrap());
    }

    #[test]
    fn additive_elimination() {
        let ctx = FglContext::new(4, Specialization::Additive).unwrap();
        let z2 = eliminate_even_phat(1, &ctx).unwrap();
        // z2 = z1^2 in ordinary homology.
        assert_eq!(z2, GenPoly::gen(1).mul(&GenPoly::gen(1)));
        let k = FglContext::new(4, Specialization::Multiplicative(Beta::Int(1))).unwrap();
        let z2 = eliminate_even_phat(1, &k).unwrap();
        let z1 = GenPoly::gen(1);
        assert_eq!(z2, z1.mul(&z1).sub(&z1));
    }
}
