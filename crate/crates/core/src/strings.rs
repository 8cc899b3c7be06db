//! Strings of Dirac series: Levi subsets of the Dynkin diagram, the string
//! count `Σ N_i`, and string families built from scattered members of a
//! Levi factor together with their limits at negative parameter values.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootsystem::{RootDatum, RootType};
use crate::sieve::Parameter;
use crate::tables::ScatteredRow;
use crate::weight::Weight;
use crate::weylgroup::{InvolutionRecord, WeylElement};
use crate::Rational;
use num_traits::Signed;

/// One connected component of a Levi subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeviComponent {
    pub root_type: RootType,
    /// `node_map[k - 1]` is the ambient node carrying the component's label `k`.
    pub node_map: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeviSubset {
    pub nodes: Vec<usize>,
    pub components: Vec<LeviComponent>,
}

fn family_rank(t: RootType) -> u8 {
    match t {
        RootType::A(_) => 0,
        RootType::D(_) => 1,
        RootType::E6 | RootType::E7 => 2,
    }
}

/// Sort key putting larger components first, and `E` before `D` before `A`.
fn component_key(t: RootType) -> (usize, u8) {
    (t.rank(), family_rank(t))
}

impl LeviSubset {
    /// Component types, largest first.
    pub fn types(&self) -> Vec<RootType> {
        let mut t: Vec<RootType> = self.components.iter().map(|c| c.root_type).collect();
        t.sort_by(|a, b| component_key(*b).cmp(&component_key(*a)).then(a.cmp(b)));
        t
    }

    /// Label such as `A2A1A1` or `A1^4`; a type repeated three or more
    /// times is written with an exponent.
    pub fn type_label(&self) -> String {
        type_label(&self.types())
    }

    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    pub fn contains(&self, node: usize) -> bool {
        self.nodes.contains(&node)
    }
}

pub fn type_label(types: &[RootType]) -> String {
    if types.is_empty() {
        return "empty".into();
    }
    let mut out = String::new();
    let mut i = 0;
    while i < types.len() {
        let mut j = i;
        while j < types.len() && types[j] == types[i] {
            j += 1;
        }
        let run = j - i;
        if run >= 3 {
            out.push_str(&format!("{}^{run}", types[i]));
        } else {
            for _ in 0..run {
                out.push_str(&types[i].to_string());
            }
        }
        i = j;
    }
    out
}

/// Induced subdiagram on `nodes` (1-based), split into labelled components.
pub fn levi_subset(datum: &RootDatum, nodes: &[usize]) -> Result<LeviSubset> {
    let mut nodes = nodes.to_vec();
    nodes.sort_unstable();
    nodes.dedup();
    if let Some(&bad) = nodes.iter().find(|&&n| n == 0 || n > datum.rank()) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            rank: datum.rank(),
        });
    }
    let adjacent = |a: usize, b: usize| a != b && datum.cartan(a - 1, b - 1) != 0;
    let mut seen: Vec<usize> = Vec::new();
    let mut components = Vec::new();
    for &start in &nodes {
        if seen.contains(&start) {
            continue;
        }
        let mut comp = vec![start];
        let mut k = 0;
        while k < comp.len() {
            let v = comp[k];
            for &u in &nodes {
                if adjacent(u, v) && !comp.contains(&u) {
                    comp.push(u);
                }
            }
            k += 1;
        }
        seen.extend(&comp);
        comp.sort_unstable();
        components.push(label_component(&comp, &adjacent));
    }
    Ok(LeviSubset { nodes, components })
}

fn label_component(comp: &[usize], adjacent: &dyn Fn(usize, usize) -> bool) -> LeviComponent {
    let neighbours = |v: usize| -> Vec<usize> { comp.iter().copied().filter(|&u| adjacent(u, v)).collect() };
    // walks from `from` away from `prev` until the end of an arm
    let arm = |prev: usize, from: usize| -> Vec<usize> {
        let mut path = vec![from];
        let (mut p, mut c) = (prev, from);
        loop {
            let next: Vec<usize> = neighbours(c).into_iter().filter(|&u| u != p).collect();
            match next.as_slice() {
                [n] => {
                    path.push(*n);
                    p = c;
                    c = *n;
                }
                _ => return path,
            }
        }
    };
    let n = comp.len();
    match comp.iter().copied().find(|&v| neighbours(v).len() == 3) {
        None => {
            // a path; label 1 is the end with the smaller ambient index
            let start = comp
                .iter()
                .copied()
                .filter(|&v| neighbours(v).len() <= 1)
                .min()
                .expect("path has an end");
            let mut map = vec![start];
            if n > 1 {
                map.extend(arm(start, neighbours(start)[0]));
            }
            LeviComponent {
                root_type: RootType::A(n),
                node_map: map,
            }
        }
        Some(branch) => {
            // arms listed from the branch node outward
            let mut arms: Vec<Vec<usize>> = neighbours(branch).into_iter().map(|u| arm(branch, u)).collect();
            arms.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
            let lens: Vec<usize> = arms.iter().map(Vec::len).collect();
            let mut map = vec![0; n];
            let root_type = match lens.as_slice() {
                [1, 1, k] => {
                    // D_n: long arm carries labels 1..n-2 ending at the branch
                    let long = &arms[2];
                    for (i, &v) in long.iter().rev().enumerate() {
                        map[i] = v;
                    }
                    map[n - 3] = branch;
                    let (lo, hi) = (arms[0][0].min(arms[1][0]), arms[0][0].max(arms[1][0]));
                    map[n - 2] = hi;
                    map[n - 1] = lo;
                    debug_assert_eq!(*k + 3, n);
                    RootType::D(n)
                }
                [1, 2, 2] | [1, 2, 3] => {
                    // E: 1-3-4-5-6(-7) with 2 on 4; the shorter long arm
                    // (lower indices on ties) carries 3, 1
                    map[3] = branch;
                    map[1] = arms[0][0];
                    map[2] = arms[1][0];
                    map[0] = arms[1][1];
                    for (i, &v) in arms[2].iter().enumerate() {
                        map[4 + i] = v;
                    }
                    if n == 6 {
                        RootType::E6
                    } else {
                        RootType::E7
                    }
                }
                _ => unreachable!("simply-laced diagram with unexpected branch {lens:?}"),
            };
            LeviComponent {
                root_type,
                node_map: map,
            }
        }
    }
}

/// All `2^rank` Levi subsets, indexed by bitmask.
pub fn classify_levi_subsets(datum: &RootDatum) -> Vec<LeviSubset> {
    let r = datum.rank();
    (0u32..1 << r)
        .map(|mask| {
            let nodes: Vec<usize> = (0..r).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
            levi_subset(datum, &nodes).expect("nodes in range")
        })
        .collect()
}

/// Number of Levi subsets of each size with each type multiset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientTable {
    /// `by_size[k]` lists `(types, count)` for subsets of size `k`.
    pub by_size: Vec<Vec<(Vec<RootType>, u64)>>,
}

impl CoefficientTable {
    pub fn new(subsets: &[LeviSubset], rank: usize) -> Self {
        let mut maps: Vec<BTreeMap<Vec<RootType>, u64>> = vec![BTreeMap::new(); rank + 1];
        for s in subsets {
            *maps[s.size()].entry(s.types()).or_default() += 1;
        }
        let by_size = maps
            .into_iter()
            .map(|m| {
                let mut v: Vec<(Vec<RootType>, u64)> = m.into_iter().collect();
                v.sort_by(|(ta, ca), (tb, cb)| {
                    let ka = ta.first().map(|t| component_key(*t));
                    let kb = tb.first().map(|t| component_key(*t));
                    kb.cmp(&ka)
                        .then(cb.cmp(ca))
                        .then_with(|| type_label(ta).cmp(&type_label(tb)))
                });
                v
            })
            .collect();
        CoefficientTable { by_size }
    }

    /// `D4:1 A4:5 ...` for one size.
    pub fn line(&self, size: usize) -> String {
        self.by_size[size]
            .iter()
            .map(|(t, c)| format!("{}:{c}", type_label(t)))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn total(&self, size: usize) -> u64 {
        self.by_size[size].iter().map(|(_, c)| c).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantEntry {
    pub value: u64,
    pub source: String,
}

/// Sizes `N_G` of the scattered parts of the Levi factor types.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StringConstants {
    pub entries: BTreeMap<String, ConstantEntry>,
}

pub const REQUIRED_CONSTANTS: [&str; 10] = ["A1", "A2", "A3", "A4", "A5", "A6", "D4", "D5", "D6", "E6"];

/// `(N_0, …, N_6)` for `E_7`.
pub const E7_STRING_COUNTS: [u64; 7] = [1, 7, 27, 71, 135, 181, 156];

const SHIPPED_CONSTANTS: &str = include_str!("../data/string_constants.json");

impl StringConstants {
    pub fn shipped() -> Self {
        Self::from_json(SHIPPED_CONSTANTS).expect("shipped constants parse")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Every required entry set to zero.
    pub fn zeroed() -> Self {
        let entries = REQUIRED_CONSTANTS
            .iter()
            .map(|k| {
                (
                    k.to_string(),
                    ConstantEntry {
                        value: 0,
                        source: "zeroed".into(),
                    },
                )
            })
            .collect();
        StringConstants { entries }
    }

    pub fn get(&self, label: &str) -> Option<u64> {
        self.entries.get(label).map(|e| e.value)
    }

    pub fn missing(&self) -> Vec<String> {
        REQUIRED_CONSTANTS
            .iter()
            .filter(|k| !self.entries.contains_key(**k))
            .map(|k| k.to_string())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StringCounts {
    /// `per_size[i]` counts strings whose Levi subset has `i` nodes.
    pub per_size: Vec<u64>,
    pub total: u64,
}

impl fmt::Display for StringCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.per_size.iter().map(u64::to_string).collect();
        write!(f, "{} | total {}", parts.join(" "), self.total)
    }
}

/// `N_i = Σ_{|L| = i} Π N_G` over proper Levi subsets, with the empty
/// product equal to 1.
pub fn count_strings(datum: &RootDatum, constants: &StringConstants) -> Result<StringCounts> {
    let r = datum.rank();
    let subsets = classify_levi_subsets(datum);
    let mut needed: Vec<String> = subsets
        .iter()
        .filter(|s| s.size() < r)
        .flat_map(|s| s.components.iter().map(|c| c.root_type.to_string()))
        .filter(|l| constants.get(l).is_none())
        .collect();
    needed.extend(constants.missing());
    needed.sort();
    needed.dedup();
    if !needed.is_empty() {
        return Err(Error::MissingConstants(needed));
    }
    let mut per_size = vec![0u64; r];
    for s in subsets.iter().filter(|s| s.size() < r) {
        let product: u64 = s
            .components
            .iter()
            .map(|c| constants.get(&c.root_type.to_string()).unwrap_or(0))
            .product();
        per_size[s.size()] += product;
    }
    let total = per_size.iter().sum();
    Ok(StringCounts { per_size, total })
}

/// Compares `E_7` string counts with the known values; each mismatch is
/// described by one line.
pub fn relation_violations(counts: &StringCounts) -> Vec<String> {
    counts
        .per_size
        .iter()
        .zip(E7_STRING_COUNTS)
        .enumerate()
        .filter(|(_, (got, want))| **got != *want)
        .map(|(i, (got, want))| format!("N_{i} = {got}, expected {want}"))
        .collect()
}

/// Rewrites an involution of each Levi component in ambient labels.
/// `parts[k]` acts on `levi.components[k]`.
pub fn embed_levi_involution(datum: &RootDatum, levi: &LeviSubset, parts: &[WeylElement]) -> Result<InvolutionRecord> {
    if parts.len() != levi.components.len() {
        return Err(Error::DimensionMismatch {
            expected: levi.components.len(),
            found: parts.len(),
        });
    }
    let mut word = Vec::new();
    for (comp, elem) in levi.components.iter().zip(parts) {
        let sub = RootDatum::new(comp.root_type);
        elem.rank()
            .eq(&sub.rank())
            .then_some(())
            .ok_or(Error::DimensionMismatch {
                expected: sub.rank(),
                found: elem.rank(),
            })?;
        if !elem.is_involution() {
            return Err(Error::NotInvolution);
        }
        word.extend(elem.reduced_word(&sub).into_iter().map(|i| comp.node_map[i - 1]));
    }
    InvolutionRecord::from_word(datum, &word)
}

/// A scattered member of one Levi component: `s·ρ` and `2λ` in the
/// component's own coordinates.
#[derive(Debug, Clone)]
pub struct LeviMember {
    pub s_rho: Weight,
    pub lambda: Weight,
}

impl LeviMember {
    pub fn new(s_rho: &[i32], lambda2: &[i32]) -> Self {
        LeviMember {
            s_rho: Weight::from_integral(s_rho),
            lambda: Weight::from_doubled(lambda2),
        }
    }

    /// The trivial representation: `s = w0`, `λ = ρ`.
    pub fn trivial(rank: usize) -> Self {
        LeviMember {
            s_rho: Weight::constant_doubled(rank, -2),
            lambda: Weight::constant_doubled(rank, 2),
        }
    }
}

/// `λ = fixed + Σ (x_k / 2) ϖ_{f_k}` over the free nodes `f_k`.
#[derive(Debug, Clone)]
pub struct StringFamily {
    pub levi: LeviSubset,
    pub s_embedded: InvolutionRecord,
    /// Doubled `λ` on the Levi nodes, zero on free nodes.
    pub fixed_pattern: Weight,
    pub free_slots: Vec<usize>,
}

/// Affine integer vector `constant + Σ x_k · coeffs[k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineVector {
    pub constant: Weight,
    pub coeffs: Vec<Weight>,
    pub names: Vec<char>,
}

impl fmt::Display for AffineVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.constant.rank();
        let mut parts = Vec::with_capacity(r);
        for i in 0..r {
            let mut s = String::new();
            for (c, name) in self.coeffs.iter().zip(&self.names) {
                let d = c.doubled()[i];
                if d == 0 {
                    continue;
                }
                let coef = Rational::new(d as i64, 2);
                let sign = if coef < Rational::from_integer(0) {
                    "-"
                } else if s.is_empty() {
                    ""
                } else {
                    "+"
                };
                let mag = crate::fmt_rational(&coef.abs());
                let mag = if mag == "1" { String::new() } else { mag };
                s.push_str(&format!("{sign}{mag}{name}"));
            }
            let k = Rational::new(self.constant.doubled()[i] as i64, 2);
            if s.is_empty() {
                s = crate::fmt_rational(&k);
            } else if k != Rational::from_integer(0) {
                let sign = if k < Rational::from_integer(0) { "-" } else { "+" };
                s.push_str(&format!("{sign}{}", crate::fmt_rational(&k.abs())));
            }
            parts.push(s);
        }
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Variable name for a free node: `a` for node 1, `b` for node 2, and so on.
pub fn slot_name(node: usize) -> char {
    (b'a' + (node - 1) as u8) as char
}

impl StringFamily {
    /// Places `members[k]` on `levi.components[k]`.
    pub fn new(datum: &RootDatum, levi: LeviSubset, members: &[LeviMember]) -> Result<Self> {
        if members.len() != levi.components.len() {
            return Err(Error::DimensionMismatch {
                expected: levi.components.len(),
                found: members.len(),
            });
        }
        let mut parts = Vec::new();
        let mut fixed = Weight::zero(datum.rank());
        for (comp, m) in levi.components.iter().zip(members) {
            let sub = RootDatum::new(comp.root_type);
            parts.push(WeylElement::from_regular_image(&sub, &m.s_rho)?);
            m.lambda.check_rank(sub.rank())?;
            for (k, &node) in comp.node_map.iter().enumerate() {
                fixed.doubled_mut()[node - 1] = m.lambda.doubled()[k];
            }
        }
        let s_embedded = embed_levi_involution(datum, &levi, &parts)?;
        let free_slots = (1..=datum.rank()).filter(|n| !levi.contains(*n)).collect();
        Ok(StringFamily {
            levi,
            s_embedded,
            fixed_pattern: fixed,
            free_slots,
        })
    }

    /// `λ` with `λ_{f_k} = values[k] / 2`.
    pub fn lambda_at(&self, values: &[i32]) -> Result<Weight> {
        if values.len() != self.free_slots.len() {
            return Err(Error::DimensionMismatch {
                expected: self.free_slots.len(),
                found: values.len(),
            });
        }
        let mut lambda = self.fixed_pattern;
        for (&node, &x) in self.free_slots.iter().zip(values) {
            lambda.doubled_mut()[node - 1] = x;
        }
        Ok(lambda)
    }

    /// The parameter at the given numerators; membership in `Λ(s)` is not
    /// checked here.
    pub fn eval(&self, datum: &RootDatum, values: &[i32]) -> Result<Parameter> {
        Parameter::new(datum, self.s_embedded.clone(), self.lambda_at(values)?)
    }

    /// `λ+sλ` and `λ−sλ` as affine functions of the free numerators,
    /// checked for affinity at an extra sample point.
    pub fn symbolic(&self, datum: &RootDatum) -> Result<(AffineVector, AffineVector)> {
        let k = self.free_slots.len();
        let at = |v: &[i32]| self.eval(datum, v);
        let base = at(&vec![0; k])?;
        let mut plus_coeffs = Vec::new();
        let mut minus_coeffs = Vec::new();
        for i in 0..k {
            let mut v = vec![0; k];
            v[i] = 1;
            let p = at(&v)?;
            plus_coeffs.push(p.lambda_plus - base.lambda_plus);
            minus_coeffs.push(p.lambda_minus - base.lambda_minus);
        }
        let probe: Vec<i32> = (0..k as i32).map(|i| 3 + 2 * i).collect();
        let p = at(&probe)?;
        let mut expect_plus = base.lambda_plus;
        let mut expect_minus = base.lambda_minus;
        for (i, &x) in probe.iter().enumerate() {
            expect_plus = expect_plus + x * plus_coeffs[i];
            expect_minus = expect_minus + x * minus_coeffs[i];
        }
        if p.lambda_plus != expect_plus || p.lambda_minus != expect_minus {
            return Err(Error::Data("string family is not affine in its free variables".into()));
        }
        let names: Vec<char> = self.free_slots.iter().map(|&n| slot_name(n)).collect();
        Ok((
            AffineVector {
                constant: base.lambda_plus,
                coeffs: plus_coeffs,
                names: names.clone(),
            },
            AffineVector {
                constant: base.lambda_minus,
                coeffs: minus_coeffs,
                names,
            },
        ))
    }
}

#[derive(Debug, Clone)]
pub enum LimitOutcome {
    Limit(Parameter),
    /// The dominant conjugate of `λ` has a zero coordinate.
    Wall(Weight),
    /// The normalized pair fails the `Λ(s)` conditions.
    NotInLambda(Parameter),
}

impl LimitOutcome {
    pub fn limit(&self) -> Option<&Parameter> {
        match self {
            LimitOutcome::Limit(p) => Some(p),
            _ => None,
        }
    }
}

/// Moves `λ` into the dominant chamber by simple reflections `w` and
/// returns `(wsw⁻¹, wλ)` when `wλ` is strictly positive.
pub fn string_limit(datum: &RootDatum, family: &StringFamily, values: &[i32]) -> Result<LimitOutcome> {
    let lambda = family.lambda_at(values)?;
    let (dominant, w) = datum.make_dominant(&lambda);
    if !dominant.is_strictly_positive() {
        return Ok(LimitOutcome::Wall(dominant));
    }
    let s = crate::weylgroup::conjugate(datum, &w, &family.s_embedded.element);
    let rec = InvolutionRecord::new(datum, s)?;
    let p = Parameter::new(datum, rec, dominant)?;
    if p.in_lambda_s(datum) {
        Ok(LimitOutcome::Limit(p))
    } else {
        Ok(LimitOutcome::NotInLambda(p))
    }
}

/// Index of the row with the same `(sρ, λ)` as `p`.
pub fn match_table_row(p: &Parameter, rows: &[ScatteredRow]) -> Option<usize> {
    rows.iter()
        .find(|r| r.s_rho == p.s.s_rho && r.lambda == p.lambda)
        .map(|r| r.index)
}
