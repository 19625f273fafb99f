//! Truncated power series over the Lazard ring.
//!
//! A series lives in a fixed [`VarSet`] and keeps every monomial of total
//! variable degree at most `trunc`. Lazard-ring weight never counts toward
//! the degree. Terms are stored flattened as `(variable monomial, Lazard
//! monomial, integer)` triples sorted by the first two components, so the
//! terms of a series run in ascending degree.

use crate::error::{Error, Result};
use crate::int::Int;
use crate::lazard::{CoeffPoly, LMono, Specialization};
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde_json::{json, Map, Value};
use std::fmt;
use std::sync::Arc;

/// Maximum number of variables in one series.
pub const MAX_VARS: usize = 24;
/// Maximum truncation degree.
pub const MAX_TRUNC: u32 = 31;
const EXP_BITS: u32 = 5;
const DEG_SHIFT: u32 = 120;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Family {
    X,
    B,
    Y,
    T,
}

impl Family {
    fn prefix(self) -> &'static str {
        match self {
            Family::X => "x",
            Family::B => "b",
            Family::Y => "y",
            Family::T => "t",
        }
    }
}

/// A named variable; `t` carries index 0 and prints without it.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var {
    pub fam: Family,
    pub idx: i32,
}

impl Var {
    pub fn x(i: i32) -> Var {
        Var { fam: Family::X, idx: i }
    }
    pub fn b(i: i32) -> Var {
        Var { fam: Family::B, idx: i }
    }
    pub fn y(i: i32) -> Var {
        Var { fam: Family::Y, idx: i }
    }
    pub fn t() -> Var {
        Var { fam: Family::T, idx: 0 }
    }

    pub fn parse(s: &str) -> Result<Var> {
        let bad = || Error::Parse(format!("bad variable name {s:?}"));
        let (fam, rest) = match s.chars().next().ok_or_else(bad)? {
            'x' => (Family::X, &s[1..]),
            'b' => (Family::B, &s[1..]),
            'y' => (Family::Y, &s[1..]),
            't' => (Family::T, &s[1..]),
            _ => return Err(bad()),
        };
        if fam == Family::T {
            return if rest.is_empty() { Ok(Var::t()) } else { Err(bad()) };
        }
        let idx: i32 = rest.parse().map_err(|_| bad())?;
        Ok(Var { fam, idx })
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.fam {
            Family::T => write!(f, "t"),
            fam => write!(f, "{}{}", fam.prefix(), self.idx),
        }
    }
}

/// Ordered variable list in canonical order (family, then index).
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct VarSet {
    vars: Vec<Var>,
}

impl VarSet {
    pub fn new(mut vars: Vec<Var>) -> Result<Arc<VarSet>> {
        vars.sort();
        vars.dedup();
        if vars.len() > MAX_VARS {
            return Err(Error::Argument(format!(
                "{} variables requested, at most {MAX_VARS} supported",
                vars.len()
            )));
        }
        Ok(Arc::new(VarSet { vars }))
    }

    /// `x_1..x_nx`, `b_1..b_nb`, `y_1..y_ny`, and `t` if requested.
    pub fn standard(nx: usize, nb: usize, ny: usize, t: bool) -> Result<Arc<VarSet>> {
        let mut v = Vec::new();
        v.extend((1..=nx as i32).map(Var::x));
        v.extend((1..=nb as i32).map(Var::b));
        v.extend((1..=ny as i32).map(Var::y));
        if t {
            v.push(Var::t());
        }
        VarSet::new(v)
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn pos(&self, v: Var) -> Option<usize> {
        self.vars.binary_search(&v).ok()
    }

    pub fn require(&self, v: Var) -> Result<usize> {
        self.pos(v).ok_or_else(|| Error::Argument(format!("variable {v} not declared")))
    }

    /// Positions of the variables of one family, in index order.
    pub fn family(&self, fam: Family) -> Vec<usize> {
        (0..self.vars.len()).filter(|&k| self.vars[k].fam == fam).collect()
    }

    pub fn count(&self, fam: Family) -> usize {
        self.vars.iter().filter(|v| v.fam == fam).count()
    }

    pub fn names(&self) -> Vec<String> {
        self.vars.iter().map(|v| v.to_string()).collect()
    }
}

/// A monomial in the variables of a `VarSet`, packed so that integer order
/// is graded lex with the first variable most significant.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct SMono(pub u128);

impl SMono {
    pub const ONE: SMono = SMono(0);

    #[inline]
    fn shift(k: usize) -> u32 {
        DEG_SHIFT - EXP_BITS * (k as u32 + 1)
    }

    pub fn var(k: usize) -> SMono {
        SMono::var_pow(k, 1)
    }

    pub fn var_pow(k: usize, e: u32) -> SMono {
        assert!(k < MAX_VARS && e <= MAX_TRUNC);
        SMono(((e as u128) << DEG_SHIFT) | ((e as u128) << SMono::shift(k)))
    }

    pub fn from_exps(exps: &[(usize, u32)]) -> SMono {
        exps.iter().fold(SMono::ONE, |m, &(k, e)| m.mul(SMono::var_pow(k, e)))
    }

    #[inline]
    pub fn degree(self) -> u32 {
        (self.0 >> DEG_SHIFT) as u32
    }

    #[inline]
    pub fn exp(self, k: usize) -> u32 {
        ((self.0 >> SMono::shift(k)) & 0x1f) as u32
    }

    #[inline]
    pub fn mul(self, o: SMono) -> SMono {
        SMono(self.0 + o.0)
    }

    /// Drops variable `k` entirely.
    #[inline]
    pub fn without(self, k: usize) -> SMono {
        let e = self.exp(k) as u128;
        SMono(self.0 - (e << DEG_SHIFT) - (e << SMono::shift(k)))
    }

    /// `self / o` when `o` divides `self`.
    pub fn div(self, o: SMono, nvars: usize) -> Option<SMono> {
        for k in 0..nvars {
            if self.exp(k) < o.exp(k) {
                return None;
            }
        }
        Some(SMono(self.0 - o.0))
    }

    pub fn exps(self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|k| self.exp(k)).collect()
    }
}

pub type Term = (SMono, LMono, Int);

/// A truncated power series with Lazard-ring coefficients.
#[derive(Clone, Debug)]
pub struct TruncSeries {
    vars: Arc<VarSet>,
    trunc: u32,
    terms: Vec<Term>,
}

impl PartialEq for TruncSeries {
    fn eq(&self, o: &TruncSeries) -> bool {
        self.trunc == o.trunc && *self.vars == *o.vars && self.terms == o.terms
    }
}

impl Eq for TruncSeries {}

fn normalize(mut v: Vec<Term>, trunc: u32) -> Vec<Term> {
    v.retain(|t| t.0.degree() <= trunc && !t.2.is_zero());
    v.sort_unstable_by_key(|a| (a.0, a.1));
    let mut out: Vec<Term> = Vec::with_capacity(v.len());
    for t in v {
        match out.last_mut() {
            Some(l) if l.0 == t.0 && l.1 == t.1 => l.2.add_assign(&t.2),
            _ => out.push(t),
        }
    }
    out.retain(|t| !t.2.is_zero());
    out
}

fn from_acc(acc: FxHashMap<(u128, u128), Int>, trunc: u32) -> Vec<Term> {
    let mut v: Vec<Term> = acc
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((m, l), c)| (SMono(m), LMono(l), c))
        .filter(|t| t.0.degree() <= trunc)
        .collect();
    v.sort_unstable_by_key(|a| (a.0, a.1));
    v
}

const PAR_THRESHOLD: usize = 40_000;

impl TruncSeries {
    pub fn zero(vars: &Arc<VarSet>, trunc: u32) -> TruncSeries {
        assert!(trunc <= MAX_TRUNC, "truncation {trunc} above {MAX_TRUNC}");
        TruncSeries { vars: vars.clone(), trunc, terms: Vec::new() }
    }

    pub fn one(vars: &Arc<VarSet>, trunc: u32) -> TruncSeries {
        TruncSeries::constant(vars, trunc, &CoeffPoly::one())
    }

    pub fn constant(vars: &Arc<VarSet>, trunc: u32, c: &CoeffPoly) -> TruncSeries {
        TruncSeries::monomial(vars, trunc, SMono::ONE, c)
    }

    pub fn monomial(vars: &Arc<VarSet>, trunc: u32, m: SMono, c: &CoeffPoly) -> TruncSeries {
        let mut s = TruncSeries::zero(vars, trunc);
        if m.degree() <= trunc {
            s.terms = c.terms().iter().map(|(l, k)| (m, *l, k.clone())).collect();
        }
        s
    }

    /// The series consisting of a single declared variable.
    pub fn var(vars: &Arc<VarSet>, trunc: u32, v: Var) -> Result<TruncSeries> {
        let k = vars.require(v)?;
        Ok(TruncSeries::monomial(vars, trunc, SMono::var(k), &CoeffPoly::one()))
    }

    pub fn from_terms(vars: &Arc<VarSet>, trunc: u32, terms: Vec<Term>) -> TruncSeries {
        TruncSeries { vars: vars.clone(), trunc, terms: normalize(terms, trunc) }
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_shape(&self, o: &TruncSeries) -> Result<()> {
        if self.trunc != o.trunc || *self.vars != *o.vars {
            return Err(Error::Shape(format!(
                "series shapes differ: trunc {} over {:?} vs trunc {} over {:?}",
                self.trunc,
                self.vars.names(),
                o.trunc,
                o.vars.names()
            )));
        }
        Ok(())
    }

    /// Iterates over `(monomial, coefficient)` pairs.
    pub fn coeffs(&self) -> impl Iterator<Item = (SMono, CoeffPoly)> + '_ {
        self.terms.chunk_by(|a, b| a.0 == b.0).map(|g| {
            (g[0].0, CoeffPoly::from_sorted(g.iter().map(|t| (t.1, t.2.clone())).collect()))
        })
    }

    pub fn coefficient(&self, m: SMono) -> CoeffPoly {
        let lo = self.terms.partition_point(|t| t.0 < m);
        let hi = self.terms.partition_point(|t| t.0 <= m);
        CoeffPoly::from_sorted(self.terms[lo..hi].iter().map(|t| (t.1, t.2.clone())).collect())
    }

    /// Coefficient of a monomial given by variable exponents.
    pub fn coefficient_of(&self, exps: &[(Var, u32)]) -> Result<CoeffPoly> {
        let mut m = SMono::ONE;
        for &(v, e) in exps {
            m = m.mul(SMono::var_pow(self.vars.require(v)?, e));
        }
        Ok(self.coefficient(m))
    }

    pub fn constant_term(&self) -> CoeffPoly {
        self.coefficient(SMono::ONE)
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.first().map(|t| t.0.degree())
    }

    pub fn homogeneous_part(&self, d: u32) -> TruncSeries {
        let lo = self.terms.partition_point(|t| t.0.degree() < d);
        let hi = self.terms.partition_point(|t| t.0.degree() <= d);
        TruncSeries { vars: self.vars.clone(), trunc: self.trunc, terms: self.terms[lo..hi].to_vec() }
    }

    /// The same series with a lower truncation.
    /// Changes the truncation. Raising it asserts the caller's knowledge that
    /// no terms are missing up to `n`, as for a polynomial of degree `<= trunc`.
    pub fn retrunc(&self, n: u32) -> TruncSeries {
        if n <= self.trunc {
            self.truncate(n)
        } else {
            TruncSeries { vars: self.vars.clone(), trunc: n, terms: self.terms.clone() }
        }
    }

    pub fn truncate(&self, n: u32) -> TruncSeries {
        assert!(n <= self.trunc, "cannot raise truncation from {} to {n}", self.trunc);
        let hi = self.terms.partition_point(|t| t.0.degree() <= n);
        TruncSeries { vars: self.vars.clone(), trunc: n, terms: self.terms[..hi].to_vec() }
    }

    pub fn add(&self, o: &TruncSeries) -> Result<TruncSeries> {
        self.same_shape(o)?;
        let mut v = self.terms.clone();
        v.extend(o.terms.iter().cloned());
        Ok(TruncSeries { vars: self.vars.clone(), trunc: self.trunc, terms: normalize(v, self.trunc) })
    }

    pub fn sub(&self, o: &TruncSeries) -> Result<TruncSeries> {
        self.same_shape(o)?;
        let mut v = self.terms.clone();
        v.extend(o.terms.iter().map(|(m, l, c)| (*m, *l, c.neg())));
        Ok(TruncSeries { vars: self.vars.clone(), trunc: self.trunc, terms: normalize(v, self.trunc) })
    }

    pub fn neg(&self) -> TruncSeries {
        TruncSeries {
            vars: self.vars.clone(),
            trunc: self.trunc,
            terms: self.terms.iter().map(|(m, l, c)| (*m, *l, c.neg())).collect(),
        }
    }

    pub fn scale_int(&self, k: &Int) -> TruncSeries {
        if k.is_zero() {
            return TruncSeries::zero(&self.vars, self.trunc);
        }
        TruncSeries {
            vars: self.vars.clone(),
            trunc: self.trunc,
            terms: self.terms.iter().map(|(m, l, c)| (*m, *l, c.mul(k))).collect(),
        }
    }

    pub fn scale(&self, c: &CoeffPoly) -> TruncSeries {
        if let Some(k) = c.as_constant() {
            return self.scale_int(&k);
        }
        let mut acc: FxHashMap<(u128, u128), Int> = FxHashMap::default();
        for (m, l, x) in &self.terms {
            for (l2, y) in c.terms() {
                acc.entry((m.0, l.mul(*l2).0)).or_insert(Int::ZERO).add_mul_assign(x, y);
            }
        }
        TruncSeries { vars: self.vars.clone(), trunc: self.trunc, terms: from_acc(acc, self.trunc) }
    }

    pub fn exact_div_int(&self, k: &Int) -> Result<TruncSeries> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, l, c) in &self.terms {
            match c.div_exact(k) {
                Some(q) => terms.push((*m, *l, q)),
                None => {
                    return Err(Error::Divisibility(format!(
                        "coefficient {c} of {} not divisible by {k}",
                        self.fmt_mono(*m)
                    )))
                }
            }
        }
        Ok(TruncSeries { vars: self.vars.clone(), trunc: self.trunc, terms })
    }

    pub fn mul(&self, o: &TruncSeries) -> Result<TruncSeries> {
        self.same_shape(o)?;
        Ok(self.mul_into(o, self.trunc))
    }

    /// Product of a series known to degree `self.trunc` with one of
    /// valuation at least `o.trunc - self.trunc`, valid to `o.trunc`.
    pub fn mul_shifted(&self, o: &TruncSeries) -> Result<TruncSeries> {
        if *self.vars != *o.vars || self.trunc > o.trunc {
            return Err(Error::Shape("mul_shifted needs the lower truncation on the left".into()));
        }
        let gap = o.trunc - self.trunc;
        if let Some(v) = o.min_degree() {
            if v < gap {
                return Err(Error::Shape(format!(
                    "right factor has valuation {v}, needs at least {gap} to restore precision"
                )));
            }
        }
        Ok(self.mul_into(o, o.trunc))
    }

    fn mul_into(&self, o: &TruncSeries, trunc: u32) -> TruncSeries {
        let out_zero = TruncSeries::zero(&self.vars, trunc);
        if self.is_zero() || o.is_zero() {
            return out_zero;
        }
        let (a, b) = if self.terms.len() >= o.terms.len() { (self, o) } else { (o, self) };
        // deg_end[d] = number of terms of b with degree <= d.
        let deg_end: Vec<usize> =
            (0..=trunc).map(|d| b.terms.partition_point(|t| t.0.degree() <= d)).collect();
        let work = |chunk: &[Term]| {
            let mut acc: FxHashMap<(u128, u128), Int> = FxHashMap::default();
            for (m1, l1, c1) in chunk {
                let d1 = m1.degree();
                if d1 > trunc {
                    break;
                }
                for (m2, l2, c2) in &b.terms[..deg_end[(trunc - d1) as usize]] {
                    acc.entry((m1.mul(*m2).0, l1.mul(*l2).0))
                        .or_insert(Int::ZERO)
                        .add_mul_assign(c1, c2);
                }
            }
            acc
        };
        let pairs = a.terms.len().saturating_mul(b.terms.len());
        let terms = if pairs < PAR_THRESHOLD || rayon::current_num_threads() == 1 {
            from_acc(work(&a.terms), trunc)
        } else {
            let chunk = (a.terms.len() / (4 * rayon::current_num_threads())).max(16);
            let parts: Vec<Vec<Term>> = a
                .terms
                .par_chunks(chunk)
                .map(|c| from_acc(work(c), trunc))
                .collect();
            normalize(parts.into_iter().flatten().collect(), trunc)
        };
        TruncSeries { terms, ..out_zero }
    }

    pub fn pow(&self, e: u32) -> TruncSeries {
        let mut acc = TruncSeries::one(&self.vars, self.trunc);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_into(&base, self.trunc);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_into(&base, self.trunc);
            }
        }
        acc
    }

    /// Inverse of a series whose constant term is `1` or `-1`.
    pub fn invert_unit(&self) -> Result<TruncSeries> {
        let c = self.constant_term().as_constant();
        let c = match c {
            Some(c) if c == Int::ONE || c == Int::from(-1) => c,
            _ => {
                return Err(Error::Inversion(format!(
                    "constant term {} is not a unit",
                    self.constant_term()
                )))
            }
        };
        // Newton iteration g <- g (2 - s g), doubling precision each time.
        let mut g = TruncSeries::constant(&self.vars, self.trunc, &CoeffPoly::from_int(c));
        let two = TruncSeries::constant(&self.vars, self.trunc, &CoeffPoly::constant(2));
        let mut prec = 1u32;
        while prec <= self.trunc {
            let sg = self.mul_into(&g, self.trunc);
            g = g.mul_into(&two.sub(&sg)?, self.trunc);
            prec *= 2;
        }
        Ok(g)
    }

    /// Keeps the terms whose monomial satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(SMono) -> bool) -> TruncSeries {
        TruncSeries {
            vars: self.vars.clone(),
            trunc: self.trunc,
            terms: self.terms.iter().filter(|t| keep(t.0)).cloned().collect(),
        }
    }

    /// Sets variable `v` to zero.
    pub fn set_zero(&self, v: Var) -> Result<TruncSeries> {
        let k = self.vars.require(v)?;
        Ok(self.filter(|m| m.exp(k) == 0))
    }

    /// Coefficient of `v^e`, as a series in the remaining variables.
    pub fn coeff_of_power(&self, v: Var, e: u32) -> Result<TruncSeries> {
        let k = self.vars.require(v)?;
        let terms: Vec<Term> = self
            .terms
            .iter()
            .filter(|t| t.0.exp(k) == e)
            .map(|(m, l, c)| (m.without(k), *l, c.clone()))
            .collect();
        Ok(TruncSeries::from_terms(&self.vars, self.trunc, terms))
    }

    pub fn max_exp(&self, v: Var) -> Result<u32> {
        let k = self.vars.require(v)?;
        Ok(self.terms.iter().map(|t| t.0.exp(k)).max().unwrap_or(0))
    }

    pub fn involves(&self, v: Var) -> bool {
        match self.vars.pos(v) {
            Some(k) => self.terms.iter().any(|t| t.0.exp(k) > 0),
            None => false,
        }
    }

    /// Replaces `v` by `value`, which must have zero constant term.
    pub fn substitute(&self, v: Var, value: &TruncSeries) -> Result<TruncSeries> {
        self.same_shape(value)?;
        let k = self.vars.require(v)?;
        if !value.constant_term().is_zero() {
            return Err(Error::Substitution(format!(
                "value substituted for {v} has nonzero constant term {}",
                value.constant_term()
            )));
        }
        if value.is_zero() {
            return Ok(self.filter(|m| m.exp(k) == 0));
        }
        let top = self.terms.iter().map(|t| t.0.exp(k)).max().unwrap_or(0);
        let mut parts: Vec<Vec<Term>> = vec![Vec::new(); top as usize + 1];
        for (m, l, c) in &self.terms {
            parts[m.exp(k) as usize].push((m.without(k), *l, c.clone()));
        }
        // Horner in `value`.
        let mut acc = TruncSeries::zero(&self.vars, self.trunc);
        for e in (0..=top as usize).rev() {
            if !acc.is_zero() {
                acc = acc.mul_into(value, self.trunc);
            }
            let part = TruncSeries::from_terms(&self.vars, self.trunc, std::mem::take(&mut parts[e]));
            acc = acc.add(&part)?;
        }
        Ok(acc)
    }

    /// Simultaneous substitution; no value may involve a substituted variable.
    pub fn substitute_many(&self, subs: &[(Var, TruncSeries)]) -> Result<TruncSeries> {
        for (_, val) in subs {
            if let Some((w, _)) = subs.iter().find(|(w, _)| val.involves(*w)) {
                return Err(Error::Substitution(format!(
                    "substituted value involves {w}, which is also being replaced"
                )));
            }
        }
        let mut s = self.clone();
        for (v, val) in subs {
            s = s.substitute(*v, val)?;
        }
        Ok(s)
    }

    /// Rewrites the series over `target`, sending each variable through `map`;
    /// variables mapped to `None` are set to zero.
    pub fn relabel(&self, target: &Arc<VarSet>, map: impl Fn(Var) -> Option<Var>) -> Result<TruncSeries> {
        let n = self.vars.len();
        let mut dest: Vec<Option<usize>> = Vec::with_capacity(n);
        for &v in self.vars.vars() {
            dest.push(match map(v) {
                Some(w) => Some(target.require(w)?),
                None => None,
            });
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        'term: for (m, l, c) in &self.terms {
            let mut nm = SMono::ONE;
            for k in 0..n {
                let e = m.exp(k);
                if e == 0 {
                    continue;
                }
                match dest[k] {
                    Some(d) => nm = nm.mul(SMono::var_pow(d, e)),
                    None => continue 'term,
                }
            }
            terms.push((nm, *l, c.clone()));
        }
        Ok(TruncSeries::from_terms(target, self.trunc, terms))
    }

    /// Exchanges two variables.
    pub fn swap(&self, v: Var, w: Var) -> Result<TruncSeries> {
        self.vars.require(v)?;
        self.vars.require(w)?;
        self.relabel(&self.vars, |u| Some(if u == v { w } else if u == w { v } else { u }))
    }

    pub fn specialize(&self, spec: &Specialization) -> TruncSeries {
        if *spec == Specialization::Universal {
            return self.clone();
        }
        let mut terms = Vec::new();
        for (m, c) in self.coeffs() {
            for (l, k) in c.specialize(spec).into_terms() {
                terms.push((m, l, k));
            }
        }
        TruncSeries::from_terms(&self.vars, self.trunc, terms)
    }

    /// Exact quotient `self / d`.
    ///
    /// Division runs degree by degree against the leading monomial of the
    /// lowest homogeneous part of `d`, whose coefficient must be a nonzero
    /// integer. The quotient is known to `trunc - k`, `k` the valuation of `d`.
    pub fn exact_div(&self, d: &TruncSeries) -> Result<TruncSeries> {
        self.same_shape(d)?;
        let k = d.min_degree().ok_or_else(|| Error::Divisibility("division by zero series".into()))?;
        let low = d.homogeneous_part(k);
        let (lead_m, lead_c) = low.coeffs().last().unwrap();
        let lead_c = lead_c.as_constant().ok_or_else(|| {
            Error::Divisibility(format!("leading coefficient {lead_c} of the divisor is not an integer"))
        })?;
        let qtrunc = self.trunc - k;
        let nv = self.vars.len();
        // Sorted remainder keyed like the terms.
        let mut rem: std::collections::BTreeMap<(SMono, LMono), Int> =
            self.terms.iter().map(|(m, l, c)| ((*m, *l), c.clone())).collect();
        let mut quot: Vec<Term> = Vec::new();
        for deg in 0..=self.trunc {
            loop {
                // Leading monomial of the degree-`deg` part of the remainder.
                let lo = (SMono((deg as u128) << DEG_SHIFT), LMono(0));
                let hi = (SMono(((deg + 1) as u128) << DEG_SHIFT), LMono(0));
                let lead = rem.range(lo..hi).next_back().map(|(key, _)| key.0);
                let Some(m) = lead else { break };
                if deg < k {
                    return Err(Error::Divisibility(format!(
                        "nonzero remainder in degree {deg} below the divisor's valuation {k}"
                    )));
                }
                let qm = m.div(lead_m, nv).ok_or_else(|| {
                    Error::Divisibility(format!(
                        "nonzero remainder in degree {deg} at {}",
                        self.fmt_mono(m)
                    ))
                })?;
                let coeff: Vec<(LMono, Int)> = rem
                    .range((m, LMono(0))..=(m, LMono(u128::MAX)))
                    .map(|(key, c)| (key.1, c.clone()))
                    .collect();
                let mut qc = Vec::with_capacity(coeff.len());
                for (l, c) in coeff {
                    let q = c.div_exact(&lead_c).ok_or_else(|| {
                        Error::Divisibility(format!(
                            "nonzero remainder in degree {deg}: coefficient {c} at {} not divisible by {lead_c}",
                            self.fmt_mono(m)
                        ))
                    })?;
                    qc.push((l, q));
                }
                let room = self.trunc - qm.degree();
                for (dm, dl, dc) in &d.terms {
                    if dm.degree() > room {
                        break;
                    }
                    for (l, q) in &qc {
                        let key = (qm.mul(*dm), l.mul(*dl));
                        let e = rem.entry(key).or_insert(Int::ZERO);
                        *e = e.sub(&q.mul(dc));
                        if e.is_zero() {
                            rem.remove(&key);
                        }
                    }
                }
                for (l, q) in qc {
                    quot.push((qm, l, q));
                }
            }
        }
        Ok(TruncSeries::from_terms(&self.vars, qtrunc, quot))
    }

    /// Exact quotient by `v - w` for two distinct variables; the result has
    /// truncation `trunc - 1`.
    pub fn exact_div_linear(&self, v: Var, w: Var) -> Result<TruncSeries> {
        let i = self.vars.require(v)?;
        let j = self.vars.require(w)?;
        if i == j {
            return Err(Error::Argument("divisor v - v is zero".into()));
        }
        // Group by the remaining monomial, Lazard monomial and (v,w)-degree.
        let mut groups: FxHashMap<(u128, u128, u32), Vec<(u32, Int)>> = FxHashMap::default();
        for (m, l, c) in &self.terms {
            let a = m.exp(i);
            let b = m.exp(j);
            let rest = m.without(i).without(j);
            groups.entry((rest.0, l.0, a + b)).or_default().push((a, c.clone()));
        }
        let mut keys: Vec<_> = groups.keys().copied().collect();
        keys.sort_unstable();
        let mut out: Vec<Term> = Vec::new();
        for key in keys {
            let (rest, l, dd) = key;
            let mut f = vec![Int::ZERO; dd as usize + 1];
            for (a, c) in &groups[&key] {
                f[*a as usize] = c.clone();
            }
            // (v - w) q = f with q_{dd-1} = f_dd, q_{a-1} = f_a + q_a.
            let mut q = Int::ZERO;
            for a in (1..=dd).rev() {
                q = f[a as usize].add(&q);
                if !q.is_zero() {
                    let m = SMono(rest).mul(SMono::var_pow(i, a - 1)).mul(SMono::var_pow(j, dd - a));
                    out.push((m, LMono(l), q.clone()));
                }
            }
            if !f[0].add(&q).is_zero() {
                let m = SMono(rest).mul(SMono::var_pow(j, dd));
                return Err(Error::Divisibility(format!(
                    "not divisible by {v} - {w}: remainder in degree {} at {}",
                    m.degree(),
                    self.fmt_mono(m)
                )));
            }
        }
        Ok(TruncSeries::from_terms(&self.vars, self.trunc - 1, out))
    }

    /// `sum_w (sgn w) w(self)` over permutations of the first `n` x-variables.
    pub fn symmetrize(&self, n: usize, signed: bool) -> Result<TruncSeries> {
        let xs = self.vars.family(Family::X);
        if n > xs.len() {
            return Err(Error::Shape(format!("symmetrize over {n} x-variables, only {} declared", xs.len())));
        }
        let xs = &xs[..n];
        // Collect each term at its sorted exponent vector, with the sign of
        // the sorting permutation, then expand every orbit once.
        let mut canon: FxHashMap<(u128, u128), Int> = FxHashMap::default();
        for (m, l, c) in &self.terms {
            let e: Vec<u32> = xs.iter().map(|&k| m.exp(k)).collect();
            let mut sorted = e.clone();
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            let mut coef = c.clone();
            if signed {
                if sorted.windows(2).any(|w| w[0] == w[1]) {
                    continue;
                }
                if inversions(&e) % 2 == 1 {
                    coef = coef.neg();
                }
            }
            let key = place(*m, xs, &sorted);
            canon.entry((key.0, l.0)).or_insert(Int::ZERO).add_assign(&coef);
        }
        let mut entries: Vec<((u128, u128), Int)> = canon.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        entries.sort_unstable_by_key(|a| a.0);
        let expand = |((m, l), c): &((u128, u128), Int)| -> Vec<Term> {
            let m = SMono(*m);
            let mut e: Vec<u32> = xs.iter().map(|&k| m.exp(k)).collect();
            let mult = if signed { Int::ONE } else { stabilizer_size(&e) };
            let base = c.mul(&mult);
            let mut out = Vec::new();
            // e is sorted descending; walk its distinct rearrangements.
            e.reverse();
            loop {
                let sign_neg = signed && inversions(&e) % 2 == 1;
                let coef = if sign_neg { base.neg() } else { base.clone() };
                out.push((place(m, xs, &e), LMono(*l), coef));
                if !next_permutation(&mut e) {
                    break;
                }
            }
            out
        };
        let terms: Vec<Term> = if entries.len() * factorial_usize(n) > PAR_THRESHOLD {
            entries.par_iter().flat_map_iter(expand).collect()
        } else {
            entries.iter().flat_map(expand).collect()
        };
        Ok(TruncSeries::from_terms(&self.vars, self.trunc, terms))
    }

    /// True when fixed by every adjacent transposition of the first `n` x-variables.
    pub fn is_symmetric_in_x(&self, n: usize) -> Result<bool> {
        for i in 1..n as i32 {
            if self.swap(Var::x(i), Var::x(i + 1))? != *self {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn fmt_mono(&self, m: SMono) -> String {
        let parts: Vec<String> = (0..self.vars.len())
            .filter_map(|k| {
                let e = m.exp(k);
                match e {
                    0 => None,
                    1 => Some(self.vars.vars()[k].to_string()),
                    _ => Some(format!("{}^{e}", self.vars.vars()[k])),
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn mono_json(&self, m: SMono) -> Value {
        let mut obj = Map::new();
        for k in 0..self.vars.len() {
            let e = m.exp(k);
            if e > 0 {
                obj.insert(self.vars.vars()[k].to_string(), json!(e));
            }
        }
        Value::Object(obj)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .coeffs()
            .map(|(m, c)| json!({"m": self.mono_json(m), "coeff": c.to_json()}))
            .collect();
        json!({"vars": self.vars.names(), "trunc": self.trunc, "terms": terms})
    }

    pub fn from_json(v: &Value) -> Result<TruncSeries> {
        let names = v["vars"].as_array().ok_or_else(|| Error::Parse("missing \"vars\"".into()))?;
        let vars: Vec<Var> = names
            .iter()
            .map(|n| Var::parse(n.as_str().unwrap_or("")))
            .collect::<Result<_>>()?;
        let vars = VarSet::new(vars)?;
        let trunc = v["trunc"].as_u64().ok_or_else(|| Error::Parse("missing \"trunc\"".into()))? as u32;
        if trunc > MAX_TRUNC {
            return Err(Error::Parse(format!("trunc {trunc} above {MAX_TRUNC}")));
        }
        let mut terms = Vec::new();
        for t in v["terms"].as_array().ok_or_else(|| Error::Parse("missing \"terms\"".into()))? {
            let mut m = SMono::ONE;
            for (name, e) in t["m"].as_object().ok_or_else(|| Error::Parse("missing \"m\"".into()))? {
                let k = vars.require(Var::parse(name)?)?;
                let e = e.as_u64().ok_or_else(|| Error::Parse("bad exponent".into()))? as u32;
                m = m.mul(SMono::var_pow(k, e));
            }
            for (l, c) in CoeffPoly::from_json(&t["coeff"])?.into_terms() {
                terms.push((m, l, c));
            }
        }
        Ok(TruncSeries::from_terms(&vars, trunc, terms))
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0 + O({})", self.trunc + 1);
        }
        let parts: Vec<String> = self
            .coeffs()
            .map(|(m, c)| {
                let mono = self.fmt_mono(m);
                match c.as_constant() {
                    Some(k) if m == SMono::ONE => k.to_string(),
                    Some(k) if k.is_one() => mono,
                    Some(k) if k == Int::from(-1) => format!("-{mono}"),
                    Some(k) => format!("{k}*{mono}"),
                    None if m == SMono::ONE => format!("({c})"),
                    None => format!("({c})*{mono}"),
                }
            })
            .collect();
        write!(f, "{} + O({})", parts.join(" + "), self.trunc + 1)
    }
}

fn place(m: SMono, xs: &[usize], e: &[u32]) -> SMono {
    let mut out = m;
    for &k in xs {
        out = out.without(k);
    }
    for (&k, &x) in xs.iter().zip(e) {
        if x > 0 {
            out = out.mul(SMono::var_pow(k, x));
        }
    }
    out
}

/// Pairs `i < j` with `e_i < e_j`.
fn inversions(e: &[u32]) -> usize {
    let mut n = 0;
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            if e[i] < e[j] {
                n += 1;
            }
        }
    }
    n
}

fn stabilizer_size(e: &[u32]) -> Int {
    let mut acc = Int::ONE;
    for g in e.chunk_by(|a, b| a == b) {
        acc = acc.mul(&Int::factorial(g.len() as u32));
    }
    acc
}

fn factorial_usize(n: usize) -> usize {
    (1..=n).product::<usize>().max(1)
}

/// Advances to the next lexicographic arrangement; false after the last.
pub fn next_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(nx: usize, trunc: u32) -> (Arc<VarSet>, Vec<TruncSeries>) {
        let vs = VarSet::standard(nx, 0, 0, false).unwrap();
        let xs = (1..=nx as i32).map(|i| TruncSeries::var(&vs, trunc, Var::x(i)).unwrap()).collect();
        (vs, xs)
    }

    #[test]
    fn truncated_products() {
        let (vs, x) = setup(2, 1);
        let one = TruncSeries::one(&vs, 1);
        let p = one.add(&x[0]).unwrap().mul(&one.sub(&x[0]).unwrap()).unwrap();
        assert_eq!(p, one);
        let (_, x) = setup(2, 3);
        assert_eq!(x[0].mul(&x[0]).unwrap().coefficient(SMono::var_pow(0, 2)), CoeffPoly::one());
    }

    #[test]
    fn geometric_inverse() {
        let (vs, x) = setup(1, 6);
        let u = TruncSeries::one(&vs, 6).sub(&x[0]).unwrap();
        let inv = u.invert_unit().unwrap();
        for e in 0..=6 {
            assert_eq!(inv.coefficient(SMono::var_pow(0, e)), CoeffPoly::one());
        }
        assert!(x[0].invert_unit().is_err());
    }

    #[test]
    fn linear_division() {
        let (_, x) = setup(2, 4);
        let f = x[0].mul(&x[0]).unwrap().sub(&x[1].mul(&x[1]).unwrap()).unwrap();
        let q = f.exact_div_linear(Var::x(1), Var::x(2)).unwrap();
        assert_eq!(q, x[0].add(&x[1]).unwrap().truncate(3));
        let d = x[0].sub(&x[1]).unwrap();
        assert_eq!(f.exact_div(&d).unwrap(), q);
        assert!(x[0].exact_div_linear(Var::x(1), Var::x(2)).is_err());
        assert!(x[0].exact_div(&d).is_err());
    }

    #[test]
    fn symmetrization() {
        let (_, x) = setup(2, 3);
        assert_eq!(x[0].symmetrize(2, false).unwrap(), x[0].add(&x[1]).unwrap());
        assert_eq!(x[0].symmetrize(2, true).unwrap(), x[0].sub(&x[1]).unwrap());
        let sq = x[0].mul(&x[0]).unwrap();
        let a = sq.symmetrize(2, true).unwrap();
        assert_eq!(a.exact_div_linear(Var::x(1), Var::x(2)).unwrap(), x[0].add(&x[1]).unwrap().truncate(2));
    }

    #[test]
    fn substitution_and_json() {
        let (vs, x) = setup(2, 3);
        let sq = x[0].mul(&x[0]).unwrap();
        assert!(sq.substitute(Var::x(1), &TruncSeries::zero(&vs, 3)).unwrap().is_zero());
        let s = sq.substitute(Var::x(1), &x[1]).unwrap();
        assert_eq!(s, x[1].mul(&x[1]).unwrap());
        let one = TruncSeries::one(&vs, 3);
        assert!(sq.substitute(Var::x(1), &one).is_err());
        let back = TruncSeries::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
    }
}
