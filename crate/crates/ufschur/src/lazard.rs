//! The Lazard ring.
//!
//! Elements are stored as integer polynomials in polynomial generators
//! `g_1, g_2, ...` with `g_n` of weight `n`. Each `g_n` is a fixed integer
//! combination of the `a_{i,n+1-i}`, and every `a_{i,j}` is an element of
//! `Z[g]`. Its image is computed once through the injective Hurewicz map
//! into `Z[m_1, m_2, ...]` (logarithm coefficients), so the associativity
//! relations between the `a_{i,j}` hold by construction and structural
//! equality is equality in the ring.
//!
//! Serialization and `Display` use the canonical a-form obtained by writing
//! each `g_n` as its chosen combination of `a_{i,j}`.

use crate::error::{Error, Result};
use crate::int::Int;
use rustc_hash::FxHashMap;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

/// Number of polynomial generators that fit in a packed monomial.
pub const MAX_GEN: u32 = 16;
const EXP_BITS: u32 = 7;
const WEIGHT_SHIFT: u32 = 112;

/// A monomial in `g_1..g_16`, packed so that integer order is graded order
/// (weight first, then the exponent of `g_1`, `g_2`, ...).
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct LMono(pub u128);

impl LMono {
    pub const ONE: LMono = LMono(0);

    pub fn gen(n: u32) -> LMono {
        assert!((1..=MAX_GEN).contains(&n), "generator index {n} out of range");
        LMono(((n as u128) << WEIGHT_SHIFT) | (1u128 << (WEIGHT_SHIFT - EXP_BITS * n)))
    }

    pub fn weight(self) -> u32 {
        (self.0 >> WEIGHT_SHIFT) as u32
    }

    pub fn exp(self, n: u32) -> u32 {
        ((self.0 >> (WEIGHT_SHIFT - EXP_BITS * n)) & 0x7f) as u32
    }

    pub fn exps(self) -> Vec<(u32, u32)> {
        (1..=MAX_GEN).filter_map(|n| {
            let e = self.exp(n);
            (e > 0).then_some((n, e))
        })
        .collect()
    }

    #[inline]
    pub fn mul(self, o: LMono) -> LMono {
        let w = self.weight() + o.weight();
        assert!(w < 128, "Lazard weight {w} exceeds packed capacity");
        LMono(self.0 + o.0)
    }
}

/// A normalized generator `a_{i,j}` with `i <= j`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct AGen {
    pub i: u32,
    pub j: u32,
}

impl AGen {
    pub fn new(i: u32, j: u32) -> Result<AGen> {
        if i == 0 || j == 0 {
            return Err(Error::Argument(format!("a_{{{i},{j}}} needs positive indices")));
        }
        Ok(AGen { i: i.min(j), j: i.max(j) })
    }

    pub fn weight(self) -> u32 {
        self.i + self.j - 1
    }
}

/// An element of the Lazard ring.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CoeffPoly {
    terms: Vec<(LMono, Int)>,
}

impl CoeffPoly {
    pub fn zero() -> CoeffPoly {
        CoeffPoly { terms: Vec::new() }
    }

    pub fn one() -> CoeffPoly {
        CoeffPoly::constant(1)
    }

    pub fn constant(c: i64) -> CoeffPoly {
        CoeffPoly::from_int(Int::from(c))
    }

    pub fn from_int(c: Int) -> CoeffPoly {
        if c.is_zero() {
            CoeffPoly::zero()
        } else {
            CoeffPoly { terms: vec![(LMono::ONE, c)] }
        }
    }

    pub fn monomial(m: LMono, c: Int) -> CoeffPoly {
        if c.is_zero() {
            CoeffPoly::zero()
        } else {
            CoeffPoly { terms: vec![(m, c)] }
        }
    }

    /// The polynomial generator `g_n`.
    pub fn g(n: u32) -> CoeffPoly {
        CoeffPoly::monomial(LMono::gen(n), Int::ONE)
    }

    /// Builds from unsorted terms, combining duplicates and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (LMono, Int)>>(it: I) -> CoeffPoly {
        let mut v: Vec<(LMono, Int)> = it.into_iter().collect();
        v.sort_by_key(|a| a.0);
        let mut out: Vec<(LMono, Int)> = Vec::with_capacity(v.len());
        for (m, c) in v {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => lc.add_assign(&c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        CoeffPoly { terms: out }
    }

    /// Trusted constructor for sorted, duplicate-free, nonzero terms.
    pub(crate) fn from_sorted(terms: Vec<(LMono, Int)>) -> CoeffPoly {
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(terms.iter().all(|t| !t.1.is_zero()));
        CoeffPoly { terms }
    }

    pub fn terms(&self) -> &[(LMono, Int)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(LMono, Int)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The integer value when the polynomial is constant.
    pub fn as_constant(&self) -> Option<Int> {
        match self.terms.as_slice() {
            [] => Some(Int::ZERO),
            [(m, c)] if *m == LMono::ONE => Some(c.clone()),
            _ => None,
        }
    }

    pub fn max_weight(&self) -> u32 {
        self.terms.last().map(|t| t.0.weight()).unwrap_or(0)
    }

    pub fn add(&self, o: &CoeffPoly) -> CoeffPoly {
        self.merge(o, false)
    }

    pub fn sub(&self, o: &CoeffPoly) -> CoeffPoly {
        self.merge(o, true)
    }

    fn merge(&self, o: &CoeffPoly, negate: bool) -> CoeffPoly {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < o.terms.len() {
            let take_left = j >= o.terms.len()
                || (i < self.terms.len() && self.terms[i].0 < o.terms[j].0);
            let take_right = i >= self.terms.len()
                || (j < o.terms.len() && o.terms[j].0 < self.terms[i].0);
            if take_left {
                out.push(self.terms[i].clone());
                i += 1;
            } else if take_right {
                let c = if negate { o.terms[j].1.neg() } else { o.terms[j].1.clone() };
                out.push((o.terms[j].0, c));
                j += 1;
            } else {
                let c = if negate {
                    self.terms[i].1.sub(&o.terms[j].1)
                } else {
                    self.terms[i].1.add(&o.terms[j].1)
                };
                if !c.is_zero() {
                    out.push((self.terms[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        CoeffPoly { terms: out }
    }

    pub fn neg(&self) -> CoeffPoly {
        CoeffPoly { terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect() }
    }

    pub fn mul(&self, o: &CoeffPoly) -> CoeffPoly {
        if self.is_zero() || o.is_zero() {
            return CoeffPoly::zero();
        }
        if self.terms.len() == 1 && self.terms[0].0 == LMono::ONE {
            return o.scale(&self.terms[0].1);
        }
        if o.terms.len() == 1 && o.terms[0].0 == LMono::ONE {
            return self.scale(&o.terms[0].1);
        }
        let mut acc: FxHashMap<LMono, Int> = FxHashMap::default();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                acc.entry(m1.mul(*m2)).or_insert(Int::ZERO).add_mul_assign(c1, c2);
            }
        }
        CoeffPoly::from_terms(acc)
    }

    pub fn scale(&self, k: &Int) -> CoeffPoly {
        if k.is_zero() {
            return CoeffPoly::zero();
        }
        CoeffPoly { terms: self.terms.iter().map(|(m, c)| (*m, c.mul(k))).collect() }
    }

    pub fn int_scale(&self, k: i64) -> CoeffPoly {
        self.scale(&Int::from(k))
    }

    pub fn mul_mono(&self, m: LMono, k: &Int) -> CoeffPoly {
        CoeffPoly { terms: self.terms.iter().map(|(m2, c)| (m.mul(*m2), c.mul(k))).collect() }
    }

    pub fn pow(&self, e: u32) -> CoeffPoly {
        let mut acc = CoeffPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Divides every coefficient by `m`, failing on the first non-divisible one.
    pub fn exact_div_int(&self, m: &Int) -> Result<CoeffPoly> {
        if m.is_zero() {
            return Err(Error::Argument("division by zero".into()));
        }
        let mut out = Vec::with_capacity(self.terms.len());
        for (mono, c) in &self.terms {
            match c.div_exact(m) {
                Some(q) => out.push((*mono, q)),
                None => {
                    let bad = CoeffPoly::monomial(*mono, c.clone());
                    return Err(Error::Divisibility(format!("term {bad} is not divisible by {m}")));
                }
            }
        }
        Ok(CoeffPoly { terms: out })
    }

    /// Applies a ring homomorphism given on the polynomial generators.
    pub fn specialize(&self, spec: &Specialization) -> CoeffPoly {
        match spec {
            Specialization::Universal => self.clone(),
            Specialization::Additive => CoeffPoly::from_int(self.constant_term()),
            Specialization::Multiplicative(b) | Specialization::KTheory(b) => {
                let sign = if matches!(spec, Specialization::KTheory(_)) { -1 } else { 1 };
                let mut out = Vec::new();
                for (m, c) in &self.terms {
                    let e1 = m.exp(1);
                    if m.weight() != e1 {
                        continue;
                    }
                    let sgn = if sign < 0 && e1 % 2 == 1 { c.neg() } else { c.clone() };
                    match b {
                        Beta::Symbolic => out.push((*m, sgn)),
                        Beta::Int(v) => out.push((LMono::ONE, sgn.mul(&Int::from(*v).pow(e1)))),
                    }
                }
                CoeffPoly::from_terms(out)
            }
            Specialization::Custom(map) => {
                let mut acc = CoeffPoly::zero();
                for (m, c) in &self.terms {
                    let mut t = CoeffPoly::from_int(c.clone());
                    for (n, e) in m.exps() {
                        let img = map.get(&n).cloned().unwrap_or_else(|| CoeffPoly::g(n));
                        t = t.mul(&img.pow(e));
                    }
                    acc = acc.add(&t);
                }
                acc
            }
        }
    }

    pub fn constant_term(&self) -> Int {
        match self.terms.first() {
            Some((m, c)) if *m == LMono::ONE => c.clone(),
            _ => Int::ZERO,
        }
    }

    /// Canonical a-form: each `g_n` replaced by its defining combination.
    pub fn to_aform(&self) -> AForm {
        let table = table_for(self.max_weight().max(1));
        let mut acc: BTreeMap<AMono, Int> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut cur: BTreeMap<AMono, Int> = BTreeMap::new();
            cur.insert(AMono(Vec::new()), c.clone());
            for (n, e) in m.exps() {
                for _ in 0..e {
                    let mut next: BTreeMap<AMono, Int> = BTreeMap::new();
                    for (am, ac) in &cur {
                        for &(gi, gj, k) in &table.g_comb[n as usize] {
                            let nm = am.times(AGen { i: gi, j: gj });
                            next.entry(nm).or_insert(Int::ZERO).add_mul_assign(ac, &Int::from(k));
                        }
                    }
                    cur = next;
                }
            }
            for (am, ac) in cur {
                acc.entry(am).or_insert(Int::ZERO).add_assign(&ac);
            }
        }
        acc.retain(|_, c| !c.is_zero());
        let mut terms: Vec<(AMono, Int)> = acc.into_iter().collect();
        terms.sort_by(|a, b| a.0.weight().cmp(&b.0.weight()).then_with(|| a.0.cmp(&b.0)));
        AForm { terms }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.to_aform()
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut a = Vec::new();
                    for &(g, e) in &m.0 {
                        a.push(json!([g.i, g.j]));
                        a.push(json!(e));
                    }
                    json!({"a": a, "c": c.to_string()})
                })
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<CoeffPoly> {
        let arr = v.as_array().ok_or_else(|| Error::Parse("coefficient must be an array".into()))?;
        let mut acc = CoeffPoly::zero();
        for t in arr {
            let c: Int = t["c"]
                .as_str()
                .ok_or_else(|| Error::Parse("missing \"c\"".into()))?
                .parse()
                .map_err(|e| Error::Parse(format!("bad integer: {e}")))?;
            let a = t["a"].as_array().ok_or_else(|| Error::Parse("missing \"a\"".into()))?;
            if a.len() % 2 != 0 {
                return Err(Error::Parse("\"a\" must alternate [i,j] and exponent".into()));
            }
            let mut term = CoeffPoly::from_int(c);
            for pair in a.chunks(2) {
                let ij = pair[0].as_array().filter(|x| x.len() == 2);
                let ij = ij.ok_or_else(|| Error::Parse("generator must be [i,j]".into()))?;
                let i = ij[0].as_u64().ok_or_else(|| Error::Parse("bad index".into()))? as u32;
                let j = ij[1].as_u64().ok_or_else(|| Error::Parse("bad index".into()))? as u32;
                let e = pair[1].as_u64().ok_or_else(|| Error::Parse("bad exponent".into()))? as u32;
                term = term.mul(&a_gen(i, j)?.pow(e));
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }
}

impl fmt::Display for CoeffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_aform())
    }
}

/// A monomial in the `a_{i,j}`, generators sorted with exponents.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct AMono(pub Vec<(AGen, u32)>);

impl AMono {
    fn times(&self, g: AGen) -> AMono {
        let mut v = self.0.clone();
        match v.iter_mut().find(|(h, _)| *h == g) {
            Some(slot) => slot.1 += 1,
            None => {
                v.push((g, 1));
                v.sort();
            }
        }
        AMono(v)
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().map(|(g, e)| g.weight() * e).sum()
    }
}

/// A Lazard-ring element written in the `a_{i,j}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AForm {
    pub terms: Vec<(AMono, Int)>,
}

impl fmt::Display for AForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { c.neg() } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let factors: Vec<String> = m
                .0
                .iter()
                .map(|(g, e)| {
                    if *e == 1 {
                        format!("a[{},{}]", g.i, g.j)
                    } else {
                        format!("a[{},{}]^{}", g.i, g.j, e)
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", abs, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Value of `beta` in the multiplicative presets.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Beta {
    /// Keep `beta` as the generator `a_{1,1}`.
    Symbolic,
    Int(i64),
}

/// Ring homomorphisms out of the Lazard ring used throughout the crate.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Specialization {
    Universal,
    /// All `a_{i,j}` to zero: `F(u,v) = u + v`.
    Additive,
    /// `a_{1,1} -> beta`, all others to zero: `F(u,v) = u + v + beta*u*v`.
    Multiplicative(Beta),
    /// `a_{1,1} -> -beta`, all others to zero: `F(u,v) = u + v - beta*u*v`,
    /// whose inverse is `-u/(1 - beta*u)`.
    KTheory(Beta),
    /// Images of the polynomial generators `g_n`; unlisted ones stay fixed.
    Custom(BTreeMap<u32, CoeffPoly>),
}

impl Specialization {
    /// Stable key used by caches.
    pub fn key(&self) -> String {
        match self {
            Specialization::Custom(m) => {
                let parts: Vec<String> = m.iter().map(|(k, v)| format!("{k}:{v}")).collect();
                format!("custom[{}]", parts.join(";"))
            }
            other => format!("{other:?}"),
        }
    }
}

/// The Lazard-ring element `a_{i,j}`.
pub fn a_gen(i: u32, j: u32) -> Result<CoeffPoly> {
    let g = AGen::new(i, j)?;
    if g.weight() > MAX_GEN {
        return Err(Error::Argument(format!("a_{{{i},{j}}} has weight above {MAX_GEN}")));
    }
    let t = table_for(g.weight());
    Ok(t.a[&(g.i, g.j)].clone())
}

/// All `a_{i,j}` with `i + j <= max_total`, keyed by `(i, j)` with `i <= j`.
pub fn a_table(max_total: u32) -> Arc<LazardTable> {
    table_for(max_total.saturating_sub(1).max(1))
}

/// The combination `g_n = sum c * a_{i,j}` used for serialization.
pub fn g_combination(n: u32) -> Vec<(u32, u32, i64)> {
    table_for(n).g_comb[n as usize].clone()
}

pub struct LazardTable {
    pub max_weight: u32,
    pub a: FxHashMap<(u32, u32), CoeffPoly>,
    pub g_comb: Vec<Vec<(u32, u32, i64)>>,
}

impl LazardTable {
    /// `a_{i,j}` for any order of indices.
    pub fn get(&self, i: u32, j: u32) -> &CoeffPoly {
        &self.a[&(i.min(j), i.max(j))]
    }
}

static TABLE: OnceLock<RwLock<Arc<LazardTable>>> = OnceLock::new();

fn table_for(w: u32) -> Arc<LazardTable> {
    assert!(w <= MAX_GEN, "weight {w} exceeds supported maximum {MAX_GEN}");
    let lock = TABLE.get_or_init(|| RwLock::new(Arc::new(build_table(6))));
    {
        let t = lock.read().unwrap();
        if t.max_weight >= w {
            return t.clone();
        }
    }
    let mut t = lock.write().unwrap();
    if t.max_weight < w {
        *t = Arc::new(build_table(w.max(t.max_weight + 2).min(MAX_GEN)));
    }
    t.clone()
}

// --- Hurewicz construction -------------------------------------------------

/// Polynomials in the logarithm coefficients `m_k`; a key is the multiset of
/// indices sorted descending, so key order is lex order with `m_k` for the
/// largest `k` most significant.
type MPoly = BTreeMap<Vec<u8>, Int>;

fn mp_add_scaled(acc: &mut MPoly, p: &MPoly, k: &Int) {
    for (m, c) in p {
        acc.entry(m.clone()).or_insert(Int::ZERO).add_mul_assign(c, k);
    }
    acc.retain(|_, c| !c.is_zero());
}

fn mp_mul(p: &MPoly, q: &MPoly) -> MPoly {
    let mut out = MPoly::new();
    for (m1, c1) in p {
        for (m2, c2) in q {
            let mut m: Vec<u8> = m1.iter().chain(m2.iter()).copied().collect();
            m.sort_unstable_by(|a, b| b.cmp(a));
            out.entry(m).or_insert(Int::ZERO).add_mul_assign(c1, c2);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn mp_var(k: u8) -> MPoly {
    let mut p = MPoly::new();
    p.insert(vec![k], Int::ONE);
    p
}

fn mp_const(c: i64) -> MPoly {
    let mut p = MPoly::new();
    if c != 0 {
        p.insert(Vec::new(), Int::from(c));
    }
    p
}

/// `d_n = gcd_i C(n+1, i)`: `p` when `n + 1` is a power of a prime `p`, else 1.
fn lazard_d(n: u32) -> i64 {
    let mut m = n + 1;
    let mut p = 2;
    while p * p <= m && !m.is_multiple_of(p) {
        p += 1;
    }
    if !m.is_multiple_of(p) {
        p = m;
    }
    while m.is_multiple_of(p) {
        m /= p;
    }
    if m == 1 {
        p as i64
    } else {
        1
    }
}

/// Small integer vector `mu` with `sum mu_i v_i = 1`, preferring small L1 norm.
fn unimodular_combination(v: &[i64]) -> Vec<i64> {
    for range in [2i64, 3] {
        let k = v.len();
        let mut best: Option<(i64, Vec<i64>)> = None;
        let mut cur = vec![-range; k];
        loop {
            let dot: i64 = cur.iter().zip(v).map(|(a, b)| a * b).sum();
            if dot == 1 {
                let l1: i64 = cur.iter().map(|a| a.abs()).sum();
                let better = match &best {
                    None => true,
                    Some((bl, bv)) => l1 < *bl || (l1 == *bl && cur > *bv),
                };
                if better {
                    best = Some((l1, cur.clone()));
                }
            }
            let mut idx = 0;
            while idx < k {
                cur[idx] += 1;
                if cur[idx] > range {
                    cur[idx] = -range;
                    idx += 1;
                } else {
                    break;
                }
            }
            if idx == k {
                break;
            }
        }
        if let Some((_, b)) = best {
            return b;
        }
    }
    // Extended Euclid fallback.
    let mut coeffs = vec![0i64; v.len()];
    let (mut g, mut acc) = (0i64, Vec::<i64>::new());
    for (idx, &x) in v.iter().enumerate() {
        if idx == 0 {
            g = x;
            acc = vec![1];
            continue;
        }
        let (d, s, t) = ext_gcd(g, x);
        acc = acc.iter().map(|c| c * s).collect();
        acc.push(t);
        g = d;
    }
    assert_eq!(g, 1, "indecomposable values are not coprime");
    coeffs.copy_from_slice(&acc);
    coeffs
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.signum() * a, a.signum(), 0)
    } else {
        let (d, s, t) = ext_gcd(b, a % b);
        (d, t, s - (a / b) * t)
    }
}

fn partitions_of(n: u32, max: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max)).rev() {
        for mut rest in partitions_of(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn build_table(max_w: u32) -> LazardTable {
    let dmax = (max_w + 1) as usize;
    // log(u) = sum l[d] u^d, the compositional inverse of u + sum m_k u^{k+1}.
    // pw[p][d] = [u^d] log(u)^p.
    let mut pw: Vec<Vec<MPoly>> = vec![vec![MPoly::new(); dmax + 1]; dmax + 1];
    pw[0][0] = mp_const(1);
    for d in 1..=dmax {
        for p in (2..=d).rev() {
            let mut acc = MPoly::new();
            for j in 1..d {
                if pw[1][j].is_empty() || pw[p - 1][d - j].is_empty() {
                    continue;
                }
                mp_add_scaled(&mut acc, &mp_mul(&pw[1][j], &pw[p - 1][d - j]), &Int::ONE);
            }
            pw[p][d] = acc;
        }
        let ld = if d == 1 {
            mp_const(1)
        } else {
            let mut acc = MPoly::new();
            for k in 1..d {
                if !pw[k + 1][d].is_empty() {
                    mp_add_scaled(&mut acc, &mp_mul(&mp_var(k as u8), &pw[k + 1][d]), &Int::from(-1));
                }
            }
            acc
        };
        pw[1][d] = ld;
    }
    // Hurewicz images of a_{i,j}: [u^i v^j] of exp(log u + log v).
    let mut ha: FxHashMap<(u32, u32), MPoly> = FxHashMap::default();
    for total in 2..=dmax {
        for i in 1..=total / 2 {
            let j = total - i;
            let mut acc = MPoly::new();
            for p in 2..=total {
                let mut inner = MPoly::new();
                for q in 1..p {
                    if pw[q][i].is_empty() || pw[p - q][j].is_empty() {
                        continue;
                    }
                    let c = Int::binomial(p as u32, q as u32);
                    mp_add_scaled(&mut inner, &mp_mul(&pw[q][i], &pw[p - q][j]), &c);
                }
                if inner.is_empty() {
                    continue;
                }
                let coef = if p == 1 { mp_const(1) } else { mp_var((p - 1) as u8) };
                mp_add_scaled(&mut acc, &mp_mul(&coef, &inner), &Int::ONE);
            }
            ha.insert((i as u32, j as u32), acc);
        }
    }
    // Generators and conversion into Z[g].
    let mut g_comb: Vec<Vec<(u32, u32, i64)>> = vec![Vec::new(); (max_w + 1) as usize];
    let mut hg: Vec<MPoly> = vec![MPoly::new(); (max_w + 1) as usize];
    let mut a: FxHashMap<(u32, u32), CoeffPoly> = FxHashMap::default();
    let mut hg_cache: BTreeMap<Vec<u32>, MPoly> = BTreeMap::new();
    for n in 1..=max_w {
        let d = lazard_d(n);
        let half: Vec<u32> = (1..=n.div_ceil(2)).collect();
        let vals: Vec<i64> = half
            .iter()
            .map(|&i| Int::binomial(n + 1, i).as_i64().unwrap() / d)
            .collect();
        let mu = unimodular_combination(&vals);
        let mut h = MPoly::new();
        for (&i, &c) in half.iter().zip(&mu) {
            if c != 0 {
                g_comb[n as usize].push((i, n + 1 - i, c));
                mp_add_scaled(&mut h, &ha[&(i, n + 1 - i)], &Int::from(c));
            }
        }
        debug_assert_eq!(h.get(&vec![n as u8]), Some(&Int::from(d)));
        hg[n as usize] = h;
        for &i in &half {
            let img = to_g_basis(&ha[&(i, n + 1 - i)], n, &hg, &mut hg_cache);
            a.insert((i, n + 1 - i), img);
        }
    }
    LazardTable { max_weight: max_w, a, g_comb }
}

fn hg_of(beta: &[u32], hg: &[MPoly], cache: &mut BTreeMap<Vec<u32>, MPoly>) -> MPoly {
    if let Some(p) = cache.get(beta) {
        return p.clone();
    }
    let p = if beta.len() == 1 {
        hg[beta[0] as usize].clone()
    } else {
        let head = hg[beta[0] as usize].clone();
        let tail = hg_of(&beta[1..], hg, cache);
        mp_mul(&head, &tail)
    };
    cache.insert(beta.to_vec(), p.clone());
    p
}

/// Writes a homogeneous element of the Hurewicz image in the `g` basis.
fn to_g_basis(f: &MPoly, n: u32, hg: &[MPoly], cache: &mut BTreeMap<Vec<u32>, MPoly>) -> CoeffPoly {
    let mut rem = f.clone();
    let mut out: Vec<(LMono, Int)> = Vec::new();
    let _ = partitions_of(n, n);
    while let Some((lead, c)) = rem.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
        let beta: Vec<u32> = lead.iter().map(|&k| k as u32).collect();
        let pivot: i64 = beta.iter().map(|&k| lazard_d(k)).product();
        let q = c
            .div_exact(&Int::from(pivot))
            .unwrap_or_else(|| panic!("Hurewicz image not in the Lazard ring at {beta:?}"));
        let h = hg_of(&beta, hg, cache);
        mp_add_scaled(&mut rem, &h, &q.neg());
        let mut mono = LMono::ONE;
        for &k in &beta {
            mono = mono.mul(LMono::gen(k));
        }
        out.push((mono, q));
    }
    CoeffPoly::from_terms(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(i: u32, j: u32) -> CoeffPoly {
        a_gen(i, j).unwrap()
    }

    #[test]
    fn generator_normalization() {
        assert_eq!(a(2, 1), a(1, 2));
        assert!(a_gen(0, 1).is_err());
        assert_eq!(AGen::new(3, 1).unwrap(), AGen { i: 1, j: 3 });
    }

    #[test]
    fn low_generators() {
        assert_eq!(g_combination(1), vec![(1, 1, 1)]);
        assert_eq!(g_combination(2), vec![(1, 2, 1)]);
        assert_eq!(g_combination(3), vec![(1, 3, -1), (2, 2, 1)]);
        assert_eq!(a(1, 1), CoeffPoly::g(1));
        assert_eq!(a(1, 2), CoeffPoly::g(2));
    }

    #[test]
    fn divisibility_is_faithful() {
        assert!(a(1, 1).exact_div_int(&Int::from(2)).is_err());
        let two_a12 = a(1, 2).int_scale(2);
        assert_eq!(two_a12.exact_div_int(&Int::from(2)).unwrap(), a(1, 2));
        assert_eq!(CoeffPoly::constant(6).exact_div_int(&Int::from(3)).unwrap(), CoeffPoly::constant(2));
    }

    #[test]
    fn lazard_relation_in_weight_three() {
        // associativity of the universal law forces this relation
        let r = a(1, 1).mul(&a(1, 2)).int_scale(2).add(&a(1, 3).int_scale(3)).sub(&a(2, 2).int_scale(2));
        assert!(r.is_zero());
        assert!(!a(1, 3).is_zero() && !a(2, 2).is_zero());
        assert_ne!(a(1, 3).int_scale(2), a(2, 2).int_scale(3));
    }

    #[test]
    fn specializations() {
        let p = a(1, 1).mul(&a(1, 2));
        assert!(p.specialize(&Specialization::Additive).is_zero());
        let m = Specialization::Multiplicative(Beta::Int(-1));
        assert_eq!(a(1, 1).specialize(&m), CoeffPoly::constant(-1));
        assert!(a(2, 2).specialize(&m).is_zero());
        let k = Specialization::KTheory(Beta::Int(-1));
        assert_eq!(a(1, 1).specialize(&k), CoeffPoly::constant(1));
        for (i, j) in [(1, 3), (2, 2), (1, 4), (2, 3), (3, 3)] {
            assert!(a(i, j).specialize(&Specialization::Multiplicative(Beta::Symbolic)).is_zero());
        }
    }

    #[test]
    fn json_roundtrip() {
        let p = a(1, 1).pow(3).add(&a(1, 1).mul(&a(1, 2))).add(&a(1, 3).int_scale(2)).sub(&a(2, 2));
        let back = CoeffPoly::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
    }
}
