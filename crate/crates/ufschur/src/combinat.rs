//! Partitions, Grassmannian permutations, reduced words and root data.

use crate::error::{Error, Result};
use crate::fgl::FglContext;
use crate::series::{TruncSeries, Var, VarSet};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// A partition with trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Partition> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Argument(format!("{parts:?} is not weakly decreasing")));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Partition {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// `lambda_i` with 1-based `i`, zero past the length.
    pub fn part(&self, i: usize) -> u32 {
        if i == 0 {
            return u32::MAX;
        }
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn conjugate(&self) -> Partition {
        let m = self.0.first().copied().unwrap_or(0);
        Partition((1..=m).map(|j| self.0.iter().filter(|&&p| p >= j).count() as u32).collect())
    }

    /// `self ⊇ other`.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.0.iter().zip(&self.0).all(|(a, b)| a <= b)
    }

    /// Boxes `(i, j)`, 1-based, row by row.
    pub fn boxes(&self) -> Vec<(u32, u32)> {
        let mut v = Vec::new();
        for (i, &p) in self.0.iter().enumerate() {
            for j in 1..=p {
                v.push((i as u32 + 1, j));
            }
        }
        v
    }

    /// Entrywise sum with another sequence (padded with zeros).
    pub fn plus(&self, other: &[u32]) -> Partition {
        let n = self.len().max(other.len());
        let v: Vec<u32> = (0..n)
            .map(|k| self.0.get(k).copied().unwrap_or(0) + other.get(k).copied().unwrap_or(0))
            .collect();
        Partition::new(v).expect("sum of partitions is a partition")
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all(n: u32) -> Vec<Partition> {
        Partition::bounded(n, n, usize::MAX)
    }

    /// Partitions of `n` with parts at most `max_part` and at most `max_len` parts.
    pub fn bounded(n: u32, max_part: u32, max_len: usize) -> Vec<Partition> {
        fn rec(n: u32, max: u32, len: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            if len == 0 {
                return;
            }
            for p in (1..=n.min(max)).rev() {
                cur.push(p);
                rec(n - p, p, len - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, max_part, max_len, &mut Vec::new(), &mut out);
        out
    }

    /// All partitions inside the `rows x cols` box, by size then reverse lex.
    pub fn in_box(rows: usize, cols: u32) -> Vec<Partition> {
        (0..=rows as u32 * cols).flat_map(|n| Partition::bounded(n, cols, rows)).collect()
    }

    pub fn to_json(&self) -> Value {
        json!(self.0)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// A strict partition.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct StrictPartition(Vec<u32>);

impl StrictPartition {
    pub fn new(parts: Vec<u32>) -> Result<StrictPartition> {
        if parts.windows(2).any(|w| w[0] <= w[1]) || parts.contains(&0) {
            return Err(Error::Argument(format!("{parts:?} is not a strict partition")));
        }
        Ok(StrictPartition(parts))
    }

    pub fn empty() -> StrictPartition {
        StrictPartition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, other: &StrictPartition) -> bool {
        other.len() <= self.len() && other.0.iter().zip(&self.0).all(|(a, b)| a <= b)
    }

    pub fn as_partition(&self) -> Partition {
        Partition(self.0.clone())
    }

    /// Boxes `(i, j)` of the shifted diagram, `i <= j < i + lambda_i`.
    pub fn shifted_boxes(&self) -> Vec<(u32, u32)> {
        let mut v = Vec::new();
        for (k, &p) in self.0.iter().enumerate() {
            let i = k as u32 + 1;
            for j in i..i + p {
                v.push((i, j));
            }
        }
        v
    }

    /// `sh(mu) = (mu_1 + 1, ..., mu_r + 1)`, with a final 1 appended when `r` is odd.
    pub fn sh(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.0.iter().map(|p| p + 1).collect();
        if v.len() % 2 == 1 {
            v.push(1);
        }
        v
    }

    /// All strict partitions of `n`, in reverse lexicographic order.
    pub fn all(n: u32) -> Vec<StrictPartition> {
        StrictPartition::bounded(n, n, usize::MAX)
    }

    pub fn bounded(n: u32, max_part: u32, max_len: usize) -> Vec<StrictPartition> {
        fn rec(n: u32, max: u32, len: usize, cur: &mut Vec<u32>, out: &mut Vec<StrictPartition>) {
            if n == 0 {
                out.push(StrictPartition(cur.clone()));
                return;
            }
            if len == 0 {
                return;
            }
            for p in (1..=n.min(max)).rev() {
                cur.push(p);
                rec(n - p, p - 1, len - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, max_part, max_len, &mut Vec::new(), &mut out);
        out
    }

    /// Strict partitions of size at most `n`, by size then reverse lex.
    pub fn up_to(n: u32) -> Vec<StrictPartition> {
        (0..=n).flat_map(StrictPartition::all).collect()
    }

    /// Strict partitions inside `rho_k = (k, k-1, ..., 1)` with at most `max_len` parts.
    pub fn in_staircase(k: u32, max_len: usize) -> Vec<StrictPartition> {
        let top = k * (k + 1) / 2;
        (0..=top)
            .flat_map(|n| StrictPartition::bounded(n, k, max_len))
            .filter(|p| p.0.iter().enumerate().all(|(i, &x)| x + i as u32 <= k))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!(self.0)
    }
}

impl fmt::Display for StrictPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_partition())
    }
}

/// `rho_n = (n, n-1, ..., 1)`.
pub fn rho(n: usize) -> Vec<u32> {
    (1..=n as u32).rev().collect()
}

/// Root system type.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum RootType {
    A,
    B,
    C,
    D,
}

/// A (signed) Grassmannian permutation in one-line notation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GrassmannianPerm {
    pub kind: RootType,
    /// Descent position for type A; number of negative entries otherwise.
    pub descent: usize,
    pub one_line: Vec<i32>,
}

impl GrassmannianPerm {
    pub fn to_json(&self) -> Value {
        json!(self.one_line)
    }
}

impl fmt::Display for GrassmannianPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self
            .one_line
            .iter()
            .map(|&v| if v < 0 { format!("{}\u{305}", -v) } else { v.to_string() })
            .collect();
        write!(f, "{}", s.join(" "))
    }
}

/// `w_lambda` in `S_N` with descent at `n`: `i_k = lambda_{n-k+1} + k`, then
/// `j_k = n + k - lambda'_k`.
pub fn lambda_to_w_a(lambda: &Partition, n: usize, big_n: usize) -> Result<GrassmannianPerm> {
    if lambda.len() > n || lambda.part(1) as usize > big_n.saturating_sub(n) {
        return Err(Error::Argument(format!("{lambda} does not fit in a {n} x {} box", big_n - n.min(big_n))));
    }
    let conj = lambda.conjugate();
    let mut w: Vec<i32> = (1..=n).map(|k| (lambda.part(n - k + 1) as usize + k) as i32).collect();
    w.extend((1..=big_n - n).map(|k| (n + k - conj.part(k) as usize) as i32));
    Ok(GrassmannianPerm { kind: RootType::A, descent: n, one_line: w })
}

pub fn w_to_lambda_a(w: &GrassmannianPerm) -> Result<Partition> {
    let n = w.descent;
    if w.kind != RootType::A || n > w.one_line.len() {
        return Err(Error::Argument("not a type A Grassmannian permutation".into()));
    }
    let first = &w.one_line[..n];
    if first.windows(2).any(|p| p[0] >= p[1]) || w.one_line[n..].windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::Argument("permutation is not Grassmannian at the descent".into()));
    }
    let parts: Vec<u32> = (1..=n).rev().map(|k| (first[k - 1] - k as i32) as u32).collect();
    Partition::new(parts)
}

/// Signed Grassmannian element of rank `rank`: `-lambda_1, ..., -lambda_r`,
/// then the remaining positive values in increasing order.
pub fn lambda_to_w_c(lambda: &StrictPartition, rank: usize) -> Result<GrassmannianPerm> {
    if lambda.part(1) as usize > rank {
        return Err(Error::Argument(format!("{lambda} needs rank at least {}", lambda.part(1))));
    }
    let mut w: Vec<i32> = lambda.parts().iter().map(|&p| -(p as i32)).collect();
    w.extend((1..=rank as i32).filter(|v| !lambda.parts().contains(&(*v as u32))));
    Ok(GrassmannianPerm { kind: RootType::C, descent: lambda.len(), one_line: w })
}

pub fn w_to_lambda_c(w: &GrassmannianPerm) -> Result<StrictPartition> {
    let neg: Vec<u32> = w.one_line.iter().take_while(|&&v| v < 0).map(|&v| (-v) as u32).collect();
    if w.one_line[neg.len()..].iter().any(|&v| v < 0) || w.one_line[neg.len()..].windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::Argument("not a signed Grassmannian element".into()));
    }
    StrictPartition::new(neg)
}

/// Reduced word of `w_lambda` in type A: the box `(i, j)` carries `n + j - i`;
/// read rows bottom to top, each right to left.
pub fn reduced_word_a(lambda: &Partition, n: usize) -> Vec<i32> {
    let mut word = Vec::new();
    for i in (1..=lambda.len()).rev() {
        for j in (1..=lambda.part(i)).rev() {
            word.push(n as i32 + j as i32 - i as i32);
        }
    }
    word
}

/// Reduced word in types B/C: shifted box `(i, j)` carries `j - i`.
pub fn reduced_word_bc(lambda: &StrictPartition) -> Vec<i32> {
    let mut word = Vec::new();
    for i in (1..=lambda.len()).rev() {
        let i32_ = i as i32;
        for j in (i32_..i32_ + lambda.part(i) as i32).rev() {
            word.push(j - i32_);
        }
    }
    word
}

/// `{lambda_k + n - k + 1}` for `k = 1..n`.
pub fn maya_a(mu: &Partition, n: usize) -> Vec<u32> {
    (1..=n).map(|k| mu.part(k) + (n - k) as u32 + 1).collect()
}

fn from_maya_a(mut s: Vec<u32>) -> Partition {
    s.sort_unstable_by(|a, b| b.cmp(a));
    let n = s.len();
    Partition::new((1..=n).map(|k| s[k - 1] - (n - k) as u32 - 1).collect()).unwrap()
}

/// `s_i` acting on `P_n` (type A, `i >= 1`): swaps `i` and `i + 1` in the Maya set.
pub fn simple_action_a(i: u32, mu: &Partition, n: usize) -> Partition {
    reflect_a(i, i + 1, mu, n)
}

/// The reflection in `t_j - t_i` acting on `P_n`.
pub fn reflect_a(i: u32, j: u32, mu: &Partition, n: usize) -> Partition {
    let s: Vec<u32> = maya_a(mu, n)
        .into_iter()
        .map(|v| if v == i { j } else if v == j { i } else { v })
        .collect();
    from_maya_a(s)
}

/// `s_i` on strict partitions (type C): `s_0` toggles the part 1, `s_i` swaps `i` and `i + 1`.
pub fn simple_action_c(i: u32, mu: &StrictPartition) -> StrictPartition {
    if i == 0 {
        reflect_c(&Root::from_pairs(&[(1, 2)]), mu)
    } else {
        reflect_c(&Root::from_pairs(&[(i + 1, 1), (i, -1)]), mu)
    }
}

/// Reflection in a type C root acting on strict partitions through the set of parts.
pub fn reflect_c(root: &Root, mu: &StrictPartition) -> StrictPartition {
    let mut set: Vec<u32> = mu.parts().to_vec();
    let has = |s: &Vec<u32>, v: u32| s.contains(&v);
    let toggle = |s: &mut Vec<u32>, v: u32| {
        if let Some(p) = s.iter().position(|&x| x == v) {
            s.remove(p);
        } else {
            s.push(v);
        }
    };
    match root.0.as_slice() {
        // 2 t_i
        [(i, 2)] => toggle(&mut set, *i),
        // t_j - t_i (stored sorted by index: (i, -1), (j, 1))
        [(i, -1), (j, 1)] | [(i, 1), (j, -1)] => {
            if has(&set, *i) != has(&set, *j) {
                toggle(&mut set, *i);
                toggle(&mut set, *j);
            }
        }
        // t_i + t_j
        [(i, 1), (j, 1)]
            if has(&set, *i) == has(&set, *j) => {
                toggle(&mut set, *i);
                toggle(&mut set, *j);
            }
        _ => {}
    }
    set.sort_unstable_by(|a, b| b.cmp(a));
    StrictPartition(set)
}

/// An integer combination of the `t_i`, sorted by index.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Root(pub Vec<(u32, i32)>);

impl Root {
    pub fn from_pairs(pairs: &[(u32, i32)]) -> Root {
        let mut m: BTreeMap<u32, i32> = BTreeMap::new();
        for &(i, c) in pairs {
            *m.entry(i).or_insert(0) += c;
        }
        Root(m.into_iter().filter(|(_, c)| *c != 0).collect())
    }

    /// `t_j - t_i`.
    pub fn diff(j: u32, i: u32) -> Root {
        Root::from_pairs(&[(j, 1), (i, -1)])
    }

    /// `t_i + t_j` (for `i == j` this is `2 t_i`).
    pub fn sum(i: u32, j: u32) -> Root {
        Root::from_pairs(&[(i, 1), (j, 1)])
    }

    pub fn neg(&self) -> Root {
        Root(self.0.iter().map(|&(i, c)| (i, -c)).collect())
    }

    pub fn max_index(&self) -> u32 {
        self.0.iter().map(|p| p.0).max().unwrap_or(0)
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &(i, c) in &self.0 {
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            if mag == 1 {
                write!(f, "{sign}t{i}")?;
            } else {
                write!(f, "{sign}{mag}t{i}")?;
            }
            first = false;
        }
        Ok(())
    }
}

/// Simple roots: type A `alpha_i = t_{i+1} - t_i`; B `alpha_0 = t_1`;
/// C `alpha_0 = 2 t_1`; D `alpha_0 = t_1 + t_2` (the extra node); others as in A.
pub fn simple_root(kind: RootType, i: u32) -> Root {
    match (kind, i) {
        (RootType::B, 0) => Root::from_pairs(&[(1, 1)]),
        (RootType::C, 0) => Root::sum(1, 1),
        (RootType::D, 0) => Root::sum(1, 2),
        (RootType::A, 0) => panic!("type A simple roots start at 1"),
        _ => Root::diff(i + 1, i),
    }
}

/// `Inv(lambda)` in type A: `t_{lambda_i + n - i + 1} - t_{n + j - lambda'_j}` per box.
pub fn inversion_set_a(lambda: &Partition, n: usize) -> Vec<Root> {
    let conj = lambda.conjugate();
    lambda
        .boxes()
        .into_iter()
        .map(|(i, j)| {
            let a = lambda.part(i as usize) + n as u32 - i + 1;
            let b = n as u32 + j - conj.part(j as usize);
            Root::diff(a, b)
        })
        .collect()
}

/// `Inv(lambda)` in type C.
pub fn inversion_set_c(lambda: &StrictPartition) -> Vec<Root> {
    let r = lambda.len();
    let mut out = Vec::new();
    for i in 1..=r {
        let li = lambda.part(i);
        for j in i..=r {
            out.push(Root::sum(li, lambda.part(j)));
        }
        for j in 1..li {
            if !(i + 1..=r).any(|p| lambda.part(p) == j) {
                out.push(Root::diff(li, j));
            }
        }
    }
    out
}

/// `e(sum c_i t_i) = sum_F [c_i](b_i)` as a series over `vars`.
pub fn euler(root: &Root, ctx: &FglContext, vars: &Arc<VarSet>, trunc: u32) -> Result<TruncSeries> {
    let mut acc: Option<TruncSeries> = None;
    for &(i, c) in &root.0 {
        let b = TruncSeries::var(vars, trunc, Var::b(i as i32))?;
        let term = if c == 1 { b } else { ctx.n_series(c as i64, &b)? };
        acc = Some(match acc {
            None => term,
            Some(a) => ctx.formal_sum(&a, &term)?,
        });
    }
    acc.ok_or_else(|| Error::Argument("euler class of the zero root".into()))
}

/// `prod_{alpha in Inv(lambda)} e(-alpha)` in type A.
pub fn euler_product_a(lambda: &Partition, n: usize, ctx: &FglContext, vars: &Arc<VarSet>, trunc: u32) -> Result<TruncSeries> {
    euler_product(&inversion_set_a(lambda, n), ctx, vars, trunc)
}

/// `prod_{alpha in Inv(lambda)} e(-alpha)` in type C.
pub fn euler_product_c(lambda: &StrictPartition, ctx: &FglContext, vars: &Arc<VarSet>, trunc: u32) -> Result<TruncSeries> {
    euler_product(&inversion_set_c(lambda), ctx, vars, trunc)
}

pub fn euler_product(roots: &[Root], ctx: &FglContext, vars: &Arc<VarSet>, trunc: u32) -> Result<TruncSeries> {
    let mut acc = TruncSeries::one(vars, trunc);
    for r in roots {
        acc = acc.mul(&euler(&r.neg(), ctx, vars, trunc)?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn sp(v: &[u32]) -> StrictPartition {
        StrictPartition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn grassmannian_examples() {
        let w = lambda_to_w_a(&p(&[4, 2, 1, 0]), 4, 10).unwrap();
        assert_eq!(w.one_line, vec![1, 3, 5, 8, 2, 4, 6, 7, 9, 10]);
        assert_eq!(w_to_lambda_a(&w).unwrap(), p(&[4, 2, 1]));
        assert_eq!(lambda_to_w_a(&p(&[1]), 1, 2).unwrap().one_line, vec![2, 1]);
        let c = lambda_to_w_c(&sp(&[6, 4, 3, 1]), 7).unwrap();
        assert_eq!(c.one_line, vec![-6, -4, -3, -1, 2, 5, 7]);
        assert_eq!(w_to_lambda_c(&c).unwrap(), sp(&[6, 4, 3, 1]));
    }

    #[test]
    fn reduced_words() {
        assert_eq!(reduced_word_a(&p(&[4, 2, 1]), 4), vec![2, 4, 3, 7, 6, 5, 4]);
        assert_eq!(reduced_word_bc(&sp(&[4, 2, 1])), vec![0, 1, 0, 3, 2, 1, 0]);
        assert!(reduced_word_a(&Partition::empty(), 3).is_empty());
    }

    #[test]
    fn words_build_the_shape() {
        let lam = p(&[4, 2, 1]);
        let mut mu = Partition::empty();
        for &i in reduced_word_a(&lam, 4).iter().rev() {
            mu = simple_action_a(i as u32, &mu, 4);
        }
        assert_eq!(mu, lam);
        let lam = sp(&[4, 2, 1]);
        let mut mu = StrictPartition::empty();
        for &i in reduced_word_bc(&lam).iter().rev() {
            mu = simple_action_c(i as u32, &mu);
        }
        assert_eq!(mu, lam);
    }

    #[test]
    fn inversion_counts() {
        assert_eq!(inversion_set_a(&p(&[1]), 1), vec![Root::diff(2, 1)]);
        assert_eq!(inversion_set_c(&sp(&[1])), vec![Root::sum(1, 1)]);
        let lam = sp(&[5, 3, 1]);
        assert_eq!(inversion_set_c(&lam).len(), lam.shifted_boxes().len());
        let lam = p(&[3, 1, 1]);
        assert_eq!(inversion_set_a(&lam, 3).len(), 5);
    }

    #[test]
    fn sh_appends_one_for_odd_length() {
        assert_eq!(sp(&[3, 1, 0].iter().copied().filter(|&x| x > 0).collect::<Vec<_>>()).sh(), vec![4, 2]);
        assert_eq!(sp(&[2]).sh(), vec![3, 1]);
    }
}
