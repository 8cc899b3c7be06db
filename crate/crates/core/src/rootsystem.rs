//! Cartan data and exact weight arithmetic for the simply-laced types
//! `A_n` (n ≤ 6), `D_n` (4 ≤ n ≤ 6), `E_6` and `E_7`.
//!
//! Nodes follow the Bourbaki numbering. For `E_7` the chain is
//! 1–3–4–5–6–7 with node 2 attached to node 4.
//!
//! The invariant form is normalized by `⟨α_i, α_j⟩ = cartan[i][j]`, so every
//! root has squared length 2 and `⟨ϖ_i, ϖ_j⟩ = (C⁻¹)_{ij}`. Under this
//! normalization `‖2ρ(E_7)‖² = 798`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::weight::{Weight, MAX_RANK};
use crate::weylgroup::WeylElement;
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RootType {
    A(usize),
    D(usize),
    E6,
    E7,
}

impl RootType {
    pub fn rank(self) -> usize {
        match self {
            RootType::A(n) | RootType::D(n) => n,
            RootType::E6 => 6,
            RootType::E7 => 7,
        }
    }

    /// Bourbaki edges, 1-based.
    fn edges(self) -> Vec<(usize, usize)> {
        match self {
            RootType::A(n) => (1..n).map(|i| (i, i + 1)).collect(),
            RootType::D(n) => {
                let mut e: Vec<_> = (1..n - 1).map(|i| (i, i + 1)).collect();
                e.push((n - 2, n));
                e
            }
            RootType::E6 => vec![(1, 3), (3, 4), (4, 5), (5, 6), (2, 4)],
            RootType::E7 => vec![(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (2, 4)],
        }
    }

    /// Permutation of node indices (0-based) induced by the nontrivial
    /// diagram automorphism, or the identity for `E_7` and `A_1`.
    pub fn diagram_permutation(self) -> Vec<usize> {
        let r = self.rank();
        match self {
            RootType::A(_) => (0..r).rev().collect(),
            RootType::D(_) => {
                let mut p: Vec<usize> = (0..r).collect();
                p.swap(r - 2, r - 1);
                p
            }
            RootType::E6 => vec![5, 1, 4, 3, 2, 0],
            RootType::E7 => (0..r).collect(),
        }
    }
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootType::A(n) => write!(f, "A{n}"),
            RootType::D(n) => write!(f, "D{n}"),
            RootType::E6 => write!(f, "E6"),
            RootType::E7 => write!(f, "E7"),
        }
    }
}

impl FromStr for RootType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().replace('_', "");
        let unsupported = || Error::UnsupportedType(s.to_string());
        let (family, n) = t.split_at(1.min(t.len()));
        let n: usize = n.parse().map_err(|_| unsupported())?;
        match (family.to_ascii_uppercase().as_str(), n) {
            ("A", 1..=6) => Ok(RootType::A(n)),
            ("D", 4..=6) => Ok(RootType::D(n)),
            ("E", 6) => Ok(RootType::E6),
            ("E", 7) => Ok(RootType::E7),
            _ => Err(unsupported()),
        }
    }
}

/// Immutable root datum of a simply-laced simple Lie algebra.
#[derive(Debug, Clone)]
pub struct RootDatum {
    root_type: RootType,
    rank: usize,
    cartan: [[i32; MAX_RANK]; MAX_RANK],
    det: i64,
    // det · C⁻¹, an integer matrix
    adjugate: [[i64; MAX_RANK]; MAX_RANK],
    positive_roots: Vec<Vec<i32>>,
    rho: Weight,
    highest_root: Weight,
    level_vector: Vec<i64>,
}

impl RootDatum {
    pub fn new(root_type: RootType) -> Self {
        let rank = root_type.rank();
        let mut cartan = [[0i32; MAX_RANK]; MAX_RANK];
        for (i, row) in cartan.iter_mut().enumerate().take(rank) {
            row[i] = 2;
        }
        for (a, b) in root_type.edges() {
            cartan[a - 1][b - 1] = -1;
            cartan[b - 1][a - 1] = -1;
        }

        let inverse = invert(&cartan, rank);
        let det = determinant(&cartan, rank);
        let mut adjugate = [[0i64; MAX_RANK]; MAX_RANK];
        for i in 0..rank {
            for j in 0..rank {
                let v = inverse[i][j] * Rational::from_integer(det);
                assert!(v.is_integer());
                adjugate[i][j] = v.to_integer();
            }
        }

        let positive_roots = positive_roots_by_closure(&cartan, rank);

        let mut level_vector = vec![0i64; rank];
        for (i, level) in level_vector.iter_mut().enumerate() {
            let col: i64 = (0..rank).map(|j| adjugate[j][i]).sum();
            assert_eq!((2 * col) % det, 0);
            *level = 2 * col / det;
        }

        let rho = Weight::constant_doubled(rank, 2);
        let mut datum = RootDatum {
            root_type,
            rank,
            cartan,
            det,
            adjugate,
            positive_roots,
            rho,
            highest_root: Weight::zero(rank),
            level_vector,
        };
        datum.highest_root = datum
            .positive_roots
            .iter()
            .map(|c| datum.root_weight(c))
            .filter(|w| w.is_dominant())
            .max_by_key(|w| datum.height_doubled(w))
            .expect("root system has a dominant root");
        datum
    }

    pub fn from_label(label: &str) -> Result<Self> {
        Ok(RootDatum::new(label.parse()?))
    }

    pub fn root_type(&self) -> RootType {
        self.root_type
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan(&self, i: usize, j: usize) -> i32 {
        self.cartan[i][j]
    }

    pub fn cartan_matrix(&self) -> Vec<Vec<i32>> {
        (0..self.rank).map(|i| self.cartan[i][..self.rank].to_vec()).collect()
    }

    pub fn cartan_determinant(&self) -> i64 {
        self.det
    }

    pub fn inverse_cartan(&self) -> Vec<Vec<Rational>> {
        (0..self.rank)
            .map(|i| {
                (0..self.rank)
                    .map(|j| Rational::new(self.adjugate[i][j], self.det))
                    .collect()
            })
            .collect()
    }

    pub(crate) fn adjugate(&self) -> &[[i64; MAX_RANK]; MAX_RANK] {
        &self.adjugate
    }

    /// Positive roots as coefficient vectors in the simple-root basis,
    /// sorted by height and then lexicographically.
    pub fn positive_roots(&self) -> &[Vec<i32>] {
        &self.positive_roots
    }

    pub fn rho(&self) -> Weight {
        self.rho
    }

    pub fn highest_root(&self) -> Weight {
        self.highest_root
    }

    /// Entry `i` is the height of ϖ_i, i.e. `⟨ϖ_i, 2ρ∨⟩`.
    pub fn level_vector(&self) -> &[i64] {
        &self.level_vector
    }

    /// The simple root α_i (1-based) in ϖ-coordinates.
    pub fn simple_root(&self, i: usize) -> Weight {
        let row: Vec<i32> = self.cartan[i - 1][..self.rank].to_vec();
        Weight::from_integral(&row)
    }

    /// Converts simple-root coefficients into a ϖ-coordinate weight.
    pub fn root_weight(&self, coeffs: &[i32]) -> Weight {
        let coords: Vec<i32> = (0..self.rank)
            .map(|j| (0..self.rank).map(|i| coeffs[i] * self.cartan[i][j]).sum())
            .collect();
        Weight::from_integral(&coords)
    }

    pub fn zero(&self) -> Weight {
        Weight::zero(self.rank)
    }

    /// `Σ d_i · adj_ij · e_j` for doubled coordinate vectors; the inner
    /// product of the underlying weights is this value over [`Self::form_denominator`].
    #[inline]
    pub(crate) fn scaled_inner(&self, d: &[i32], e: &[i32]) -> i64 {
        let mut acc = 0i64;
        for i in 0..self.rank {
            if d[i] == 0 {
                continue;
            }
            let row = &self.adjugate[i];
            let mut s = 0i64;
            for j in 0..self.rank {
                s += row[j] * e[j] as i64;
            }
            acc += d[i] as i64 * s;
        }
        acc
    }

    #[inline]
    pub(crate) fn form_denominator(&self) -> i64 {
        4 * self.det
    }

    /// Exact value of the invariant form.
    pub fn inner_product(&self, mu: &Weight, nu: &Weight) -> Result<Rational> {
        mu.check_rank(self.rank)?;
        nu.check_rank(self.rank)?;
        Ok(Rational::new(
            self.scaled_inner(mu.doubled(), nu.doubled()),
            self.form_denominator(),
        ))
    }

    pub fn norm_sq(&self, mu: &Weight) -> Rational {
        debug_assert_eq!(mu.rank(), self.rank);
        Rational::new(self.scaled_inner(mu.doubled(), mu.doubled()), self.form_denominator())
    }

    /// Coordinates `c` with `μ = Σ c_i α_i`.
    pub fn to_simple_root_basis(&self, mu: &Weight) -> Vec<Rational> {
        self.simple_coords_scaled(mu)
            .into_iter()
            .map(|n| Rational::new(n, 2 * self.det))
            .collect()
    }

    /// `2·det · c` where `c` are the simple-root coordinates of `μ`.
    pub(crate) fn simple_coords_scaled(&self, mu: &Weight) -> Vec<i64> {
        let d = mu.doubled();
        (0..self.rank)
            .map(|i| (0..self.rank).map(|j| self.adjugate[i][j] * d[j] as i64).sum())
            .collect()
    }

    pub fn in_root_lattice(&self, mu: &Weight) -> bool {
        let q = 2 * self.det;
        self.simple_coords_scaled(mu).iter().all(|n| n % q == 0)
    }

    /// Applies the simple reflection s_i (0-based) in place:
    /// `λ ↦ λ − λ_i α_i`.
    #[inline]
    pub(crate) fn reflect_in_place(&self, doubled: &mut [i32], i: usize) {
        let c = doubled[i];
        if c != 0 {
            let row = &self.cartan[i];
            for (d, &a) in doubled.iter_mut().zip(row.iter()) {
                *d -= c * a;
            }
        }
    }

    /// `s_i · μ` for a 1-based index.
    pub fn simple_reflection(&self, i: usize, mu: &Weight) -> Result<Weight> {
        if i == 0 || i > self.rank {
            return Err(Error::IndexOutOfRange {
                index: i,
                rank: self.rank,
            });
        }
        let mut out = *mu;
        self.reflect_in_place(out.doubled_mut(), i - 1);
        Ok(out)
    }

    /// The dominant W-conjugate `{μ}`.
    pub fn dominant_conjugate(&self, mu: &Weight) -> Weight {
        let mut out = *mu;
        let d = out.doubled_mut();
        while let Some(i) = d.iter().position(|&x| x < 0) {
            self.reflect_in_place(d, i);
        }
        out
    }

    /// Returns `({μ}, w)` with `w·μ = {μ}` dominant, obtained by reflecting
    /// at the first negative coordinate until none is left.
    pub fn make_dominant(&self, mu: &Weight) -> (Weight, WeylElement) {
        let mut out = *mu;
        let mut applied = Vec::new();
        let d = out.doubled_mut();
        while let Some(i) = d.iter().position(|&x| x < 0) {
            self.reflect_in_place(d, i);
            applied.push(i + 1);
        }
        applied.reverse();
        let w = WeylElement::from_word(self, &applied).expect("indices in range");
        (out, w)
    }

    /// `⟨μ, α⟩ ≠ 0` for every positive root α.
    pub fn is_regular(&self, mu: &Weight) -> bool {
        let d = mu.doubled();
        self.positive_roots
            .iter()
            .all(|c| c.iter().zip(d).map(|(&a, &b)| a * b).sum::<i32>() != 0)
    }

    /// Weyl's dimension formula `Π_{α>0} ⟨μ+ρ, α⟩ / ⟨ρ, α⟩`.
    pub fn weyl_dimension(&self, mu: &Weight) -> Result<BigUint> {
        mu.check_rank(self.rank)?;
        if !mu.is_dominant() {
            return Err(Error::NotDominant(mu.to_string()));
        }
        let coords = mu.integral_coords().ok_or_else(|| Error::NotIntegral(mu.to_string()))?;
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for c in &self.positive_roots {
            let shifted: i64 = c.iter().zip(&coords).map(|(&a, &m)| a as i64 * (m as i64 + 1)).sum();
            let base: i64 = c.iter().map(|&a| a as i64).sum();
            num *= BigUint::from(shifted as u64);
            den *= BigUint::from(base as u64);
        }
        debug_assert!((&num % &den).is_zero());
        Ok(num / den)
    }

    fn height_doubled(&self, mu: &Weight) -> i64 {
        mu.doubled()
            .iter()
            .zip(&self.level_vector)
            .map(|(&d, &l)| d as i64 * l)
            .sum()
    }

    /// `⟨μ, 2ρ∨⟩ = Σ μ_i · level_vector[i]`.
    pub fn height(&self, mu: &Weight) -> Rational {
        Rational::new(self.height_doubled(mu), 2)
    }

    /// A dominant μ is u-small iff `2ρ − μ` is a nonnegative rational
    /// combination of simple roots.
    pub fn is_u_small(&self, mu: &Weight) -> Result<bool> {
        mu.check_rank(self.rank)?;
        if !mu.is_dominant() {
            return Err(Error::NotDominant(mu.to_string()));
        }
        let diff = 2 * self.rho - *mu;
        Ok(self.simple_coords_scaled(&diff).iter().all(|&n| n >= 0))
    }

    /// Image of a weight under the diagram automorphism.
    pub fn dual_weight(&self, mu: &Weight) -> Weight {
        mu.permuted(&self.root_type.diagram_permutation())
    }

    /// Builds a weight from a slice of ϖ-coordinates, checking the rank.
    pub fn integral_weight(&self, coords: &[i32]) -> Result<Weight> {
        if coords.len() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                found: coords.len(),
            });
        }
        Ok(Weight::from_integral(coords))
    }

    pub fn doubled_weight(&self, doubled: &[i32]) -> Result<Weight> {
        if doubled.len() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                found: doubled.len(),
            });
        }
        Ok(Weight::from_doubled(doubled))
    }
}

fn invert(m: &[[i32; MAX_RANK]; MAX_RANK], n: usize) -> Vec<Vec<Rational>> {
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = (0..n).map(|j| Rational::from_integer(m[i][j] as i64)).collect();
            row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).expect("nonsingular");
        a.swap(col, pivot);
        let p = a[col][col];
        for v in a[col].iter_mut() {
            *v /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for c in 0..2 * n {
                    let sub = f * a[col][c];
                    a[r][c] -= sub;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

fn determinant(m: &[[i32; MAX_RANK]; MAX_RANK], n: usize) -> i64 {
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| Rational::from_integer(m[i][j] as i64)).collect())
        .collect();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return 0;
        };
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                let sub = f * a[col][c];
                a[r][c] -= sub;
            }
        }
    }
    assert!(det.is_integer() && det.is_positive());
    det.to_integer()
}

/// Closure of the simple roots under simple reflections, keeping only
/// positive roots.
fn positive_roots_by_closure(cartan: &[[i32; MAX_RANK]; MAX_RANK], n: usize) -> Vec<Vec<i32>> {
    let mut roots: Vec<Vec<i32>> = (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect();
    let mut seen: std::collections::HashSet<Vec<i32>> = roots.iter().cloned().collect();
    let mut idx = 0;
    while idx < roots.len() {
        let beta = roots[idx].clone();
        idx += 1;
        for i in 0..n {
            let pairing: i32 = (0..n).map(|j| cartan[i][j] * beta[j]).sum();
            let mut next = beta.clone();
            next[i] -= pairing;
            if next.iter().all(|&x| x >= 0) && next.iter().any(|&x| x > 0) && seen.insert(next.clone()) {
                roots.push(next);
            }
        }
    }
    roots.sort_by(|a, b| {
        let ha: i32 = a.iter().sum();
        let hb: i32 = b.iter().sum();
        ha.cmp(&hb).then_with(|| a.cmp(b))
    });
    roots
}
