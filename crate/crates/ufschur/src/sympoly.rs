//! Classical symmetric functions and basis expansions.
//!
//! The classical Schur `P`/`Q` polynomials are built from marked shifted
//! tableaux and the Schur polynomials from Jacobi-Trudi, so both serve as
//! oracles independent of the universal constructions.

use crate::combinat::{Partition, StrictPartition};
use crate::error::{Error, Result};
use crate::fgl::GenPoly;
use crate::int::Int;
use crate::lazard::{CoeffPoly, LMono};
use crate::series::{Family, SMono, Term, TruncSeries, VarSet};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Basis tag of an [`Expansion`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Basis {
    M,
    H,
    E,
    S,
    P,
    Q,
    SL,
    PL,
    QL,
    PHat,
    QHat,
}

impl Basis {
    pub fn name(self) -> &'static str {
        match self {
            Basis::M => "m",
            Basis::H => "h",
            Basis::E => "e",
            Basis::S => "s",
            Basis::P => "P",
            Basis::Q => "Q",
            Basis::SL => "sL",
            Basis::PL => "PL",
            Basis::QL => "QL",
            Basis::PHat => "phat",
            Basis::QHat => "qhat",
        }
    }
}

/// Coefficient of an expansion entry: a Lazard-ring element or a series in
/// the remaining variables.
#[derive(Clone, PartialEq, Debug)]
pub enum ExpCoeff {
    Ring(CoeffPoly),
    Series(TruncSeries),
}

impl ExpCoeff {
    pub fn is_zero(&self) -> bool {
        match self {
            ExpCoeff::Ring(c) => c.is_zero(),
            ExpCoeff::Series(s) => s.is_zero(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            ExpCoeff::Ring(c) => c.to_json(),
            ExpCoeff::Series(s) => s.to_json(),
        }
    }

    pub fn as_ring(&self) -> Option<&CoeffPoly> {
        match self {
            ExpCoeff::Ring(c) => Some(c),
            ExpCoeff::Series(_) => None,
        }
    }

    pub fn as_series(&self) -> Option<&TruncSeries> {
        match self {
            ExpCoeff::Series(s) => Some(s),
            ExpCoeff::Ring(_) => None,
        }
    }
}

/// Labels (partitions, or pairs of them written as `label ++ [0] ++ label`
/// for tensor bases) with nonzero coefficients in a declared basis.
#[derive(Clone, PartialEq, Debug)]
pub struct Expansion {
    pub basis: Basis,
    pub entries: Vec<(Vec<u32>, ExpCoeff)>,
}

impl Expansion {
    pub fn new(basis: Basis) -> Expansion {
        Expansion { basis, entries: Vec::new() }
    }

    pub fn push(&mut self, label: Vec<u32>, c: ExpCoeff) {
        if !c.is_zero() {
            self.entries.push((label, c));
        }
    }

    pub fn get(&self, label: &[u32]) -> Option<&ExpCoeff> {
        self.entries.iter().find(|(l, _)| l == label).map(|(_, c)| c)
    }

    /// Ring coefficient for a label, zero when absent.
    pub fn ring(&self, label: &[u32]) -> CoeffPoly {
        match self.get(label) {
            Some(ExpCoeff::Ring(c)) => c.clone(),
            _ => CoeffPoly::zero(),
        }
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> =
            self.entries.iter().map(|(l, c)| json!({"label": l, "coeff": c.to_json()})).collect();
        json!({"basis": self.basis.name(), "entries": entries})
    }
}

/// Positions of the first `n` variables of a family.
fn fam_vars(vars: &VarSet, fam: Family, n: usize) -> Result<Vec<usize>> {
    let v = vars.family(fam);
    if v.len() < n {
        return Err(Error::Shape(format!("{n} variables of family {fam:?} requested, {} declared", v.len())));
    }
    Ok(v[..n].to_vec())
}

fn sum_monomials(vars: &Arc<VarSet>, trunc: u32, monos: impl IntoIterator<Item = SMono>) -> TruncSeries {
    let terms: Vec<Term> = monos.into_iter().map(|m| (m, LMono::ONE, Int::ONE)).collect();
    TruncSeries::from_terms(vars, trunc, terms)
}

/// `e_k` in the first `n` variables of `fam`.
pub fn elementary(k: u32, n: usize, fam: Family, vars: &Arc<VarSet>, trunc: u32) -> Result<TruncSeries> {
    let pos = fam_vars(vars, fam, n)?;
    let mut out = Vec::new();
    let mut pick = vec![false; n];
    fn rec(i: usize, left: u32, pos: &[usize], pick: &mut Vec<bool>, out: &mut Vec<SMono>) {
        if left == 0 {
            out.push(SMono::from_exps(
                &pos.iter().zip(pick.iter()).filter(|(_, &p)| p).map(|(&k, _)| (k, 1)).collect::<Vec<_>>(),
            ));
            return;
        }
        if i == pos.len() {
            return;
        }
        pick[i] = true;
        rec(i + 1, left - 1, pos, pick, out);
        pick[i] = false;
        rec(i + 1, left, pos, pick, out);
    }
    rec(0, k, &pos, &mut pick, &mut out);
    Ok(sum_monomials(vars, trunc, out))
}

/// `h_k` in the first `n` variables of `fam`.
pub fn complete(k: u32, n: usize, fam: Family, vars: &Arc<VarSet>, trunc: u32) -> Result<TruncSeries> {
    let pos = fam_vars(vars, fam, n)?;
    let mut out = Vec::new();
    fn rec(i: usize, left: u32, pos: &[usize], cur: SMono, out: &mut Vec<SMono>) {
        if i + 1 == pos.len() {
            out.push(cur.mul(SMono::var_pow(pos[i], left)));
            return;
        }
        for e in 0..=left {
            rec(i + 1, left - e, pos, cur.mul(SMono::var_pow(pos[i], e)), out);
        }
    }
    if n == 0 {
        return Ok(if k == 0 { TruncSeries::one(vars, trunc) } else { TruncSeries::zero(vars, trunc) });
    }
    rec(0, k, &pos, SMono::ONE, &mut out);
    Ok(sum_monomials(vars, trunc, out))
}

/// `m_lambda` in the first `n` variables of `fam`.
pub fn monomial(lambda: &Partition, n: usize, fam: Family, vars: &Arc<VarSet>, trunc: u32) -> Result<TruncSeries> {
    let pos = fam_vars(vars, fam, n)?;
    if lambda.len() > n {
        return Ok(TruncSeries::zero(vars, trunc));
    }
    let mut e: Vec<u32> = (1..=n).map(|i| lambda.part(i)).collect();
    e.sort_unstable();
    let mut out = Vec::new();
    loop {
        out.push(SMono::from_exps(&pos.iter().copied().zip(e.iter().copied()).collect::<Vec<_>>()));
        if !crate::series::next_permutation(&mut e) {
            break;
        }
    }
    Ok(sum_monomials(vars, trunc, out))
}

/// Classical `Q_lambda` (or `P_lambda` when `p_type`) in the first `n`
/// variables of `fam`, summed over marked shifted tableaux.
pub fn classical_pq(lambda: &StrictPartition, n: usize, fam: Family, p_type: bool, vars: &Arc<VarSet>, trunc: u32) -> Result<TruncSeries> {
    let pos = fam_vars(vars, fam, n)?;
    let boxes = lambda.shifted_boxes();
    // Letters 1' < 1 < 2' < 2 < ...: the value 2k-1 is k', 2k is k.
    let mut fill: BTreeMap<(u32, u32), u32> = BTreeMap::new();
    let mut monos = Vec::new();
    fn rec(
        idx: usize,
        boxes: &[(u32, u32)],
        n: u32,
        p_type: bool,
        fill: &mut BTreeMap<(u32, u32), u32>,
        pos: &[usize],
        out: &mut Vec<SMono>,
    ) {
        if idx == boxes.len() {
            let mut m = SMono::ONE;
            for v in fill.values() {
                m = m.mul(SMono::var(pos[(v.div_ceil(2) - 1) as usize]));
            }
            out.push(m);
            return;
        }
        let (i, j) = boxes[idx];
        for v in 1..=2 * n {
            let primed = v % 2 == 1;
            if p_type && i == j && primed {
                continue;
            }
            if let Some(&l) = fill.get(&(i, j.wrapping_sub(1))) {
                if v < l || (v == l && primed) {
                    continue;
                }
            }
            if let Some(&u) = fill.get(&(i.wrapping_sub(1), j)) {
                if v < u || (v == u && !primed) {
                    continue;
                }
            }
            fill.insert((i, j), v);
            rec(idx + 1, boxes, n, p_type, fill, pos, out);
            fill.remove(&(i, j));
        }
    }
    rec(0, &boxes, n as u32, p_type, &mut fill, &pos, &mut monos);
    Ok(sum_monomials(vars, trunc, monos))
}

/// Classical Schur `s_lambda` by Jacobi-Trudi, `det(h_{lambda_i - i + j})`.
pub fn classical_s(lambda: &Partition, n: usize, fam: Family, vars: &Arc<VarSet>, trunc: u32) -> Result<TruncSeries> {
    let l = lambda.len();
    if l == 0 {
        return Ok(TruncSeries::one(vars, trunc));
    }
    let h = |k: i64| -> Result<TruncSeries> {
        if k < 0 {
            Ok(TruncSeries::zero(vars, trunc))
        } else {
            complete(k as u32, n, fam, vars, trunc)
        }
    };
    let mut acc = TruncSeries::zero(vars, trunc);
    let mut perm: Vec<u32> = (0..l as u32).collect();
    loop {
        let inv = (0..l).flat_map(|a| (a + 1..l).map(move |b| (a, b))).filter(|&(a, b)| perm[a] > perm[b]).count();
        let mut term = TruncSeries::one(vars, trunc);
        for (i, &j) in perm.iter().enumerate() {
            let k = lambda.part(i + 1) as i64 - i as i64 + j as i64;
            term = term.mul(&h(k)?)?;
            if term.is_zero() {
                break;
            }
        }
        acc = if inv % 2 == 0 { acc.add(&term)? } else { acc.sub(&term)? };
        if !crate::series::next_permutation(&mut perm) {
            break;
        }
    }
    Ok(acc)
}

/// `Q_k = sum_{i+j=k} h_i e_j`.
pub fn classical_q_row(k: u32, n: usize, fam: Family, vars: &Arc<VarSet>, trunc: u32) -> Result<TruncSeries> {
    let mut acc = TruncSeries::zero(vars, trunc);
    for i in 0..=k {
        acc = acc.add(&complete(i, n, fam, vars, trunc)?.mul(&elementary(k - i, n, fam, vars, trunc)?)?)?;
    }
    Ok(acc)
}

/// Splits `s` by the exponents of the first `n` variables of `fam`:
/// returns `(exponent vector, coefficient series in the other variables)`.
pub fn split_by_family(s: &TruncSeries, fam: Family, n: usize) -> Result<BTreeMap<Vec<u32>, TruncSeries>> {
    let pos = fam_vars(s.vars(), fam, n)?;
    let all = s.vars().family(fam);
    let mut groups: BTreeMap<Vec<u32>, Vec<Term>> = BTreeMap::new();
    for (m, l, c) in s.terms() {
        if all[n..].iter().any(|&k| m.exp(k) > 0) {
            return Err(Error::Shape(format!("series involves {fam:?} variables beyond the first {n}")));
        }
        let e: Vec<u32> = pos.iter().map(|&k| m.exp(k)).collect();
        let mut rest = *m;
        for &k in &pos {
            rest = rest.without(k);
        }
        groups.entry(e).or_default().push((rest, *l, c.clone()));
    }
    Ok(groups
        .into_iter()
        .map(|(e, t)| (e, TruncSeries::from_terms(s.vars(), s.trunc(), t)))
        .collect())
}

/// Expansion of `s`, symmetric in the first `n` variables of `fam`, in the
/// monomial basis; coefficients are series in the remaining variables, or
/// ring elements when no other variable occurs.
pub fn expand_in_m(s: &TruncSeries, fam: Family, n: usize) -> Result<Expansion> {
    let groups = split_by_family(s, fam, n)?;
    let mut out = Expansion::new(Basis::M);
    let only_ring = groups.values().all(|c| c.terms().iter().all(|t| t.0 == SMono::ONE));
    for (e, c) in &groups {
        for i in 1..e.len() {
            let mut sw = e.clone();
            sw.swap(i - 1, i);
            if groups.get(&sw) != Some(c) {
                return Err(Error::Symmetry(format!(
                    "coefficient of exponent {e:?} differs from that of {sw:?}"
                )));
            }
        }
    }
    let mut labels: Vec<&Vec<u32>> = groups.keys().filter(|e| e.windows(2).all(|w| w[0] >= w[1])).collect();
    labels.sort_by(|a, b| {
        let sa: u32 = a.iter().sum();
        let sb: u32 = b.iter().sum();
        sa.cmp(&sb).then_with(|| b.cmp(a))
    });
    for e in labels {
        let label: Vec<u32> = e.iter().copied().filter(|&x| x > 0).collect();
        let c = &groups[e];
        if only_ring {
            out.push(label, ExpCoeff::Ring(c.constant_term()));
        } else {
            out.push(label, ExpCoeff::Series(c.clone()));
        }
    }
    Ok(out)
}

/// Writes `s`, a symmetric polynomial in the first `n` variables of `fam`
/// with ring coefficients, as a polynomial in `h_1, h_2, ...` (`z_i = h_i`).
pub fn expand_in_h(s: &TruncSeries, fam: Family, n: usize) -> Result<GenPoly> {
    let vars = s.vars().clone();
    let trunc = s.trunc();
    let mut rem = s.clone();
    // e-expansion first: e_{alpha'} has leading monomial m_alpha in lex order.
    let mut e_exp: BTreeMap<Vec<u32>, CoeffPoly> = BTreeMap::new();
    loop {
        let m = expand_in_m(&rem, fam, n)?;
        let lead = m
            .entries
            .iter()
            .max_by(|a, b| {
                let sa: u32 = a.0.iter().sum();
                let sb: u32 = b.0.iter().sum();
                sa.cmp(&sb).then_with(|| a.0.cmp(&b.0))
            })
            .cloned();
        let Some((alpha, c)) = lead else { break };
        let c = c.as_ring().cloned().ok_or_else(|| {
            Error::Argument("h-expansion needs ring coefficients".into())
        })?;
        let conj = Partition::new(alpha.clone())?.conjugate();
        let mut e_prod = TruncSeries::one(&vars, trunc);
        for &k in conj.parts() {
            e_prod = e_prod.mul(&elementary(k, n, fam, &vars, trunc)?)?;
        }
        rem = rem.sub(&e_prod.scale(&c))?;
        let key = conj.parts().to_vec();
        let cur = e_exp.remove(&key).unwrap_or_default();
        e_exp.insert(key, cur.add(&c));
    }
    // e_k = sum_{i=1}^k (-1)^{i-1} h_i e_{k-i}
    let top = e_exp.keys().flat_map(|k| k.iter().copied()).max().unwrap_or(0) as usize;
    let mut e_in_h: Vec<GenPoly> = vec![GenPoly::constant(CoeffPoly::one())];
    for k in 1..=top {
        let mut acc = GenPoly::zero();
        for i in 1..=k {
            let sign = if i % 2 == 1 { 1 } else { -1 };
            acc = acc.add(&GenPoly::gen(i).mul(&e_in_h[k - i]).scale(&CoeffPoly::constant(sign)));
        }
        e_in_h.push(acc);
    }
    let mut out = GenPoly::zero();
    for (lam, c) in e_exp {
        let mut t = GenPoly::constant(c);
        for k in lam {
            t = t.mul(&e_in_h[k as usize]);
        }
        out = out.add(&t);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs(n: usize) -> Arc<VarSet> {
        VarSet::standard(n, 0, 0, false).unwrap()
    }

    #[test]
    fn basic_polynomials() {
        let v = vs(2);
        let e2 = elementary(2, 2, Family::X, &v, 4).unwrap();
        assert_eq!(e2.to_string(), "x1*x2 + O(5)");
        let h2 = complete(2, 2, Family::X, &v, 4).unwrap();
        assert_eq!(h2.len(), 3);
        let m21 = monomial(&Partition::new(vec![2, 1]).unwrap(), 2, Family::X, &v, 4).unwrap();
        assert_eq!(m21.len(), 2);
        let m = expand_in_m(&h2, Family::X, 2).unwrap();
        assert_eq!(m.ring(&[2]), CoeffPoly::one());
        assert_eq!(m.ring(&[1, 1]), CoeffPoly::one());
    }

    #[test]
    fn q_one_row_matches_tableaux() {
        let v = vs(3);
        for k in 1..=4 {
            let lam = StrictPartition::new(vec![k]).unwrap();
            let tab = classical_pq(&lam, 3, Family::X, false, &v, 6).unwrap();
            assert_eq!(tab, classical_q_row(k, 3, Family::X, &v, 6).unwrap());
            let p = classical_pq(&lam, 3, Family::X, true, &v, 6).unwrap();
            assert_eq!(p.scale_int(&Int::from(2)), tab);
        }
    }

    #[test]
    fn schur_small_cases() {
        let v = vs(2);
        let s11 = classical_s(&Partition::new(vec![1, 1]).unwrap(), 2, Family::X, &v, 4).unwrap();
        assert_eq!(s11, elementary(2, 2, Family::X, &v, 4).unwrap());
    }

    #[test]
    fn h_expansion_of_q2() {
        let v = vs(3);
        let q2 = classical_q_row(2, 3, Family::X, &v, 4).unwrap();
        // Q_2 = 2 h_1^2
        let g = expand_in_h(&q2, Family::X, 3).unwrap();
        assert_eq!(g, GenPoly::gen(1).mul(&GenPoly::gen(1)).scale(&CoeffPoly::constant(2)));
    }

    #[test]
    fn asymmetric_input_is_rejected() {
        let v = vs(2);
        let x1 = TruncSeries::var(&v, 3, crate::series::Var::x(1)).unwrap();
        assert!(matches!(expand_in_m(&x1, Family::X, 2), Err(Error::Symmetry(_))));
    }
}
