//! Algebraic localization of types A, C and D, the GKM condition, and the
//! greedy expansion behind the basis theorems.
//!
//! A family is stored on a finite window of labels. Type A labels are
//! partitions `mu` inside the `n x k` box, evaluated at `x_i = i(b_{mu_i + n - i + 1})`.
//! Type C labels are strict partitions inside `rho_k` with at most `n` parts,
//! evaluated at `x_i = i(b_{mu_i})`. Type D uses the same strict partitions,
//! evaluated at `i(b_{sh(mu)_i})`, with `sh(mu)` of length at most `n`.

use crate::combinat::{reflect_a, reflect_c, euler, Partition, Root, RootType, StrictPartition};
use crate::error::{Error, Result};
use crate::fgl::FglContext;
use crate::series::{Family, TruncSeries, Var, VarSet};
use crate::sympoly::{Basis, ExpCoeff, Expansion};
use crate::uschur::{eval_at, onto, p_l_plus, point_a, point_c, point_sh, q_l, s_l, BMode};
use rayon::prelude::*;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::sync::Arc;

/// A finite set of localization labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub kind: RootType,
    pub n: usize,
    pub k: u32,
}

impl Window {
    pub fn new(kind: RootType, n: usize, k: u32) -> Result<Window> {
        if kind == RootType::B {
            return Err(Error::Argument("no localization map of type B".into()));
        }
        if n == 0 {
            return Err(Error::Argument("localization needs at least one variable".into()));
        }
        Ok(Window { kind, n, k })
    }

    /// Labels in size order, reverse lexicographic within a size.
    pub fn labels(&self) -> Vec<Vec<u32>> {
        match self.kind {
            RootType::A => Partition::in_box(self.n, self.k).into_iter().map(|p| p.parts().to_vec()).collect(),
            _ => StrictPartition::in_staircase(self.k, self.n)
                .into_iter()
                .filter(|p| self.kind != RootType::D || p.sh().len() <= self.n)
                .map(|p| p.parts().to_vec())
                .collect(),
        }
    }

    pub fn contains(&self, label: &[u32]) -> bool {
        let k = self.k;
        match self.kind {
            RootType::A => label.len() <= self.n && label.iter().all(|&p| p <= k),
            _ => {
                let Ok(sp) = StrictPartition::new(label.to_vec()) else { return false };
                let len_ok = if self.kind == RootType::D { sp.sh().len() <= self.n } else { sp.len() <= self.n };
                len_ok && label.iter().enumerate().all(|(i, &x)| x + i as u32 <= k)
            }
        }
    }

    /// Largest `b` index used by a point of the window.
    pub fn max_index(&self) -> u32 {
        match self.kind {
            RootType::A => self.k + self.n as u32,
            RootType::D => self.k + 1,
            _ => self.k,
        }
    }

    /// Positive roots whose reflections are tested.
    pub fn positive_roots(&self) -> Vec<Root> {
        let top = self.max_index();
        let mut out = Vec::new();
        for j in 1..=top {
            if self.kind == RootType::C {
                out.push(Root::sum(j, j));
            }
            for i in 1..j {
                out.push(Root::diff(j, i));
                if self.kind != RootType::A {
                    out.push(Root::sum(i, j));
                }
            }
        }
        out
    }

    /// `s_alpha mu`, or `None` when it leaves the window.
    pub fn reflect(&self, root: &Root, label: &[u32]) -> Result<Option<Vec<u32>>> {
        let image = match self.kind {
            RootType::A => {
                let [(i, -1), (j, 1)] = root.0.as_slice() else {
                    return Err(Error::Argument(format!("{root} is not a positive type A root")));
                };
                reflect_a(*i, *j, &Partition::new(label.to_vec())?, self.n).parts().to_vec()
            }
            RootType::C => reflect_c(root, &StrictPartition::new(label.to_vec())?).parts().to_vec(),
            RootType::D => {
                let sh = StrictPartition::new(StrictPartition::new(label.to_vec())?.sh())?;
                unshift(reflect_c(root, &sh).parts())
            }
            RootType::B => return Err(Error::Argument("no localization map of type B".into())),
        };
        Ok(self.contains(&image).then_some(image))
    }

    /// The evaluation point of `label` for a function of `n` x-variables.
    pub fn point(&self, label: &[u32]) -> Result<Vec<Option<i32>>> {
        if !self.contains(label) {
            return Err(Error::Argument(format!("label {label:?} outside the window")));
        }
        Ok(match self.kind {
            RootType::A => point_a(&Partition::new(label.to_vec())?, self.n),
            RootType::C => point_c(&StrictPartition::new(label.to_vec())?, self.n),
            _ => point_sh(&StrictPartition::new(label.to_vec())?, self.n),
        })
    }

    fn le(&self, a: &[u32], b: &[u32]) -> bool {
        a.len() <= b.len() && a.iter().zip(b).all(|(x, y)| x <= y)
    }
}

/// Inverse of `sh` on sets of even size.
fn unshift(set: &[u32]) -> Vec<u32> {
    set.iter().filter(|&&t| t > 1).map(|t| t - 1).collect()
}

/// `(psi_mu)` over a window, valued in series in the `b` variables.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalizedFamily {
    pub window: Window,
    pub vars: Arc<VarSet>,
    pub trunc: u32,
    pub points: BTreeMap<Vec<u32>, TruncSeries>,
}

fn kind_name(k: RootType) -> &'static str {
    match k {
        RootType::A => "A",
        RootType::B => "B",
        RootType::C => "C",
        RootType::D => "D",
    }
}

impl LocalizedFamily {
    /// The constant family `c` on the window.
    pub fn constant(window: Window, vars: &Arc<VarSet>, c: &TruncSeries) -> Result<LocalizedFamily> {
        let c = onto(c, vars)?;
        let points = window.labels().into_iter().map(|l| (l, c.clone())).collect();
        Ok(LocalizedFamily { window, vars: vars.clone(), trunc: c.trunc(), points })
    }

    pub fn get(&self, label: &[u32]) -> Option<&TruncSeries> {
        self.points.get(label)
    }

    pub fn is_zero(&self) -> bool {
        self.points.values().all(TruncSeries::is_zero)
    }

    /// Pointwise difference.
    pub fn sub(&self, o: &LocalizedFamily) -> Result<LocalizedFamily> {
        if self.window != o.window {
            return Err(Error::Shape("families live on different windows".into()));
        }
        let mut points = BTreeMap::new();
        for (l, v) in &self.points {
            let w = o.points.get(l).ok_or_else(|| Error::Shape(format!("label {l:?} missing")))?;
            points.insert(l.clone(), v.sub(w)?);
        }
        Ok(LocalizedFamily { window: self.window, vars: self.vars.clone(), trunc: self.trunc, points })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "type": kind_name(self.window.kind),
            "n": self.window.n,
            "points": self.points.iter().map(|(l, v)| json!({"mu": l, "value": v.to_json()})).collect::<Vec<_>>(),
        })
    }
}

/// `b` variables covering both `s` and the window.
fn family_vars(s: &TruncSeries, window: &Window) -> Result<Arc<VarSet>> {
    let idx: Vec<i32> = s.vars().vars().iter().filter(|v| v.fam == Family::B).map(|v| v.idx).collect();
    let lo = idx.iter().copied().min().unwrap_or(1).min(1);
    let hi = idx.iter().copied().max().unwrap_or(0).max(window.max_index() as i32);
    VarSet::new((lo..=hi).map(Var::b).collect())
}

/// `phi_mu(F)`: `F` evaluated at the point of `mu`.
pub fn phi(f: &TruncSeries, label: &[u32], window: &Window, ctx: &FglContext) -> Result<TruncSeries> {
    let nx = f.vars().count(Family::X);
    if nx != window.n {
        return Err(Error::Argument(format!("function in {nx} x-variables, window for {}", window.n)));
    }
    eval_at(f, &window.point(label)?, ctx)
}

/// `Phi(F)` on the window.
pub fn localize(f: &TruncSeries, window: &Window, ctx: &FglContext) -> Result<LocalizedFamily> {
    let vars = family_vars(f, window)?;
    let labels = window.labels();
    let values: Vec<Result<TruncSeries>> =
        labels.par_iter().map(|l| phi(f, l, window, ctx).and_then(|v| onto(&v, &vars))).collect();
    let mut points = BTreeMap::new();
    for (l, v) in labels.into_iter().zip(values) {
        points.insert(l, v?);
    }
    Ok(LocalizedFamily { window: *window, vars, trunc: f.trunc(), points })
}

/// Outcome of a GKM check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GkmReport {
    pub passed: bool,
    pub pairs_checked: usize,
    /// Pairs `(mu, alpha)` whose reflection leaves the window.
    pub pairs_skipped: usize,
    pub first_failure: Option<String>,
}

/// Checks `psi_{s_alpha mu} - psi_mu` is divisible by `e(-alpha)` for every
/// window label and tested positive root, each unordered pair once.
pub fn gkm_check(fam: &LocalizedFamily, ctx: &FglContext) -> Result<GkmReport> {
    let w = &fam.window;
    let labels = w.labels();
    if labels.len() != fam.points.len() || labels.iter().any(|l| !fam.points.contains_key(l)) {
        return Err(Error::Argument("family does not cover its window".into()));
    }
    let roots = w.positive_roots();
    let mut euler_of = BTreeMap::new();
    for r in &roots {
        euler_of.insert(r.clone(), euler(&r.neg(), ctx, &fam.vars, fam.trunc)?);
    }
    let mut pairs = Vec::new();
    let mut skipped = 0;
    for l in &labels {
        for r in &roots {
            match w.reflect(r, l)? {
                None => skipped += 1,
                Some(img) if img > *l => pairs.push((l.clone(), img, r.clone())),
                Some(_) => {}
            }
        }
    }
    let results: Vec<Option<String>> = pairs
        .par_iter()
        .map(|(l, img, r)| {
            let d = fam.points[img].sub(&fam.points[l]).ok()?;
            if d.is_zero() {
                return None;
            }
            match d.exact_div(&euler_of[r]) {
                Ok(_) => None,
                Err(e) => Some(format!("mu = {l:?}, alpha = {r}: {e}")),
            }
        })
        .collect();
    let first_failure = results.into_iter().flatten().next();
    Ok(GkmReport { passed: first_failure.is_none(), pairs_checked: pairs.len(), pairs_skipped: skipped, first_failure })
}

/// `b` prefix length used for basis functions on a window.
pub fn basis_prefix(window: &Window) -> usize {
    window.max_index() as usize
}

/// The basis function of a label: `s^L_nu` (A), `Q^L_nu` (C), `P^L_nu(..)^+` (D),
/// in `n` variables with a symbolic `b` prefix.
pub fn basis_function(label: &[u32], window: &Window, ctx: &FglContext) -> Result<TruncSeries> {
    let b = BMode::Symbolic(basis_prefix(window));
    match window.kind {
        RootType::A => s_l(&Partition::new(label.to_vec())?, window.n, b, ctx),
        RootType::C => q_l(&StrictPartition::new(label.to_vec())?, window.n, b, ctx),
        RootType::D => p_l_plus(&StrictPartition::new(label.to_vec())?, window.n, b, ctx),
        RootType::B => Err(Error::Argument("no localization map of type B".into())),
    }
}

pub fn basis_kind(window: &Window) -> Basis {
    match window.kind {
        RootType::A => Basis::SL,
        RootType::C => Basis::QL,
        _ => Basis::PL,
    }
}

/// Result of the greedy expansion.
#[derive(Clone, Debug)]
pub struct GreedyExpansion {
    /// Coefficients `c_nu` in `L[[b]]`, in the order they were found.
    pub expansion: Expansion,
    pub steps: usize,
    pub residual_zero: bool,
}

/// Expands `F` in the basis of the window's type by repeatedly removing a
/// containment-minimal (lex-least) element of the support of `Phi(F)`.
pub fn expand_greedy(f: &TruncSeries, window: &Window, ctx: &FglContext) -> Result<GreedyExpansion> {
    expand_family(&localize(f, window, ctx)?, ctx)
}

/// The greedy loop on an already localized family.
pub fn expand_family(fam: &LocalizedFamily, ctx: &FglContext) -> Result<GreedyExpansion> {
    let w = fam.window;
    let trunc = fam.trunc;
    let ctx_t = ctx.with_trunc(trunc);
    let mut psi = fam.points.clone();
    let mut out = Expansion::new(basis_kind(&w));
    let mut steps = 0;
    let cap = psi.len();
    loop {
        let support: Vec<&Vec<u32>> = psi.iter().filter(|(_, v)| !v.is_zero()).map(|(l, _)| l).collect();
        let Some(nu) = support
            .iter()
            .filter(|nu| !support.iter().any(|k| k != *nu && w.le(k, nu)))
            .min()
            .map(|nu| (*nu).clone())
        else {
            break;
        };
        if steps == cap {
            return Err(Error::Internal("greedy expansion did not terminate".into()));
        }
        steps += 1;
        let basis = localize(&basis_function(&nu, &w, &ctx_t)?, &w, &ctx_t)?;
        let diag = onto(&basis.points[&nu], &fam.vars)?;
        let val = diag.min_degree().unwrap_or(0);
        let c = psi[&nu].exact_div(&diag).map_err(|e| {
            Error::Membership(format!("coefficient at {nu:?} is not exact: {e}"))
        })?;
        // c is known to degree trunc - val; phi_mu(basis) has valuation >= val.
        let c = c.retrunc(trunc);
        for (mu, v) in psi.iter_mut() {
            let b = onto(&basis.points[mu], &fam.vars)?;
            if b.is_zero() {
                continue;
            }
            if b.min_degree().unwrap_or(0) < val {
                return Err(Error::Internal(format!("phi_{mu:?} of the basis at {nu:?} has valuation below {val}")));
            }
            *v = v.sub(&c.mul(&b)?)?;
        }
        out.push(nu, ExpCoeff::Series(c.truncate(trunc - val)));
    }
    let residual_zero = psi.values().all(TruncSeries::is_zero);
    if !residual_zero {
        return Err(Error::Membership("nonzero residual after the greedy expansion".into()));
    }
    Ok(GreedyExpansion { expansion: out, steps, residual_zero })
}

/// `sum_nu c_nu * basis_nu(x | b)` as a series in `x_1..x_n` and the `b`s.
pub fn recombine(exp: &GreedyExpansion, window: &Window, ctx: &FglContext) -> Result<TruncSeries> {
    let mut acc: Option<TruncSeries> = None;
    for (nu, c) in &exp.expansion.entries {
        let c = c.as_series().ok_or_else(|| Error::Internal("greedy coefficients are series".into()))?;
        let ctx_t = ctx.with_trunc(ctx.trunc.max(c.trunc()));
        let b = basis_function(nu, window, &ctx_t)?;
        let vars = joint_vars(&b, c)?;
        let t = b.trunc();
        let term = onto(&b, &vars)?.mul(&onto(&c.retrunc(t), &vars)?)?;
        acc = Some(match acc {
            None => term,
            Some(a) => {
                let vars = joint_vars(&a, &term)?;
                onto(&a, &vars)?.add(&onto(&term, &vars)?)?
            }
        });
    }
    acc.ok_or_else(|| Error::Argument("empty expansion".into()))
}

/// Variables of `a` and `b` together, x before b.
pub fn joint_vars(a: &TruncSeries, b: &TruncSeries) -> Result<Arc<VarSet>> {
    let mut v: Vec<Var> = a.vars().vars().to_vec();
    v.extend(b.vars().vars().iter().copied());
    v.sort_by_key(|x| (x.fam != Family::X, x.fam, x.idx));
    v.dedup();
    VarSet::new(v)
}

/// Finite-window stand-in for injectivity: a nonzero `F` must have a nonzero
/// localization somewhere on the window.
pub fn injectivity_proxy(f: &TruncSeries, window: &Window, ctx: &FglContext) -> Result<bool> {
    Ok(f.is_zero() || !localize(f, window, ctx)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows() {
        let a = Window::new(RootType::A, 2, 2).unwrap();
        assert_eq!(a.labels().len(), 6);
        let c = Window::new(RootType::C, 2, 3).unwrap();
        assert!(c.labels().contains(&vec![3, 2]));
        assert!(!c.labels().contains(&vec![3, 2, 1]));
        let d = Window::new(RootType::D, 2, 3).unwrap();
        assert!(d.labels().contains(&vec![3, 2]));
        assert!(!d.labels().contains(&vec![1]) || d.n >= 2);
        assert!(Window::new(RootType::B, 2, 2).is_err());
    }

    #[test]
    fn d_reflection_keeps_parity() {
        let d = Window::new(RootType::D, 4, 3).unwrap();
        for l in d.labels() {
            for r in d.positive_roots() {
                if let Some(img) = d.reflect(&r, &l).unwrap() {
                    let back = d.reflect(&r, &img).unwrap().unwrap();
                    assert_eq!(back, l);
                }
            }
        }
    }

    #[test]
    fn one_localizes_to_one() {
        let ctx = FglContext::universal(3);
        let w = Window::new(RootType::A, 2, 2).unwrap();
        let vars = crate::uschur::standard_vars(2, BMode::Symbolic(2)).unwrap();
        let fam = localize(&TruncSeries::one(&vars, 3), &w, &ctx).unwrap();
        assert!(fam.points.values().all(|v| *v == TruncSeries::one(&fam.vars, 3)));
        assert!(gkm_check(&fam, &ctx).unwrap().passed);
    }

    #[test]
    fn basis_function_expands_to_itself() {
        let ctx = FglContext::universal(3);
        let w = Window::new(RootType::A, 2, 3).unwrap();
        let f = basis_function(&[1], &w, &ctx).unwrap();
        let e = expand_greedy(&f, &w, &ctx).unwrap();
        assert_eq!(e.expansion.entries.len(), 1);
        assert_eq!(e.expansion.entries[0].0, vec![1]);
        let c = e.expansion.entries[0].1.as_series().unwrap();
        assert_eq!(*c, TruncSeries::one(c.vars(), c.trunc()));
    }
}
