//! Weyl group elements as integer matrices on ϖ-coordinates, orbit-based
//! enumeration of the whole group and its involutions, and diagram duality.
//!
//! Since ρ is regular, `w ↦ w·ρ` is a bijection from `W` onto the orbit of ρ,
//! so orbit points serve as element keys throughout.

use std::fmt;
use std::io::{BufRead, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rootsystem::RootDatum;
use crate::weight::{join_ints, parse_int_list, Weight, MAX_RANK};

type Matrix = [[i32; MAX_RANK]; MAX_RANK];

/// A Weyl group element. Column `j` of the matrix is `w·ϖ_j`.
#[derive(Clone)]
pub struct WeylElement {
    rank: usize,
    matrix: Matrix,
    word: Option<Vec<usize>>,
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.matrix == other.matrix
    }
}

impl Eq for WeylElement {}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeylElement")
            .field("matrix", &self.matrix_rows())
            .field("word", &self.word)
            .finish()
    }
}

fn identity_matrix(rank: usize) -> Matrix {
    let mut m = [[0; MAX_RANK]; MAX_RANK];
    for (i, row) in m.iter_mut().enumerate().take(rank) {
        row[i] = 1;
    }
    m
}

fn mat_mul(a: &Matrix, b: &Matrix, rank: usize) -> Matrix {
    let mut out = [[0; MAX_RANK]; MAX_RANK];
    for i in 0..rank {
        for k in 0..rank {
            let aik = a[i][k];
            if aik == 0 {
                continue;
            }
            for j in 0..rank {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        WeylElement {
            rank,
            matrix: identity_matrix(rank),
            word: Some(Vec::new()),
        }
    }

    /// Product `s_{w[0]} s_{w[1]} ⋯` of simple reflections (1-based indices).
    pub fn from_word(datum: &RootDatum, word: &[usize]) -> Result<Self> {
        let rank = datum.rank();
        let mut m = identity_matrix(rank);
        for &i in word {
            if i == 0 || i > rank {
                return Err(Error::IndexOutOfRange { index: i, rank });
            }
            // right-multiply by s_i: only column i changes
            for row in m.iter_mut().take(rank) {
                let dot: i32 = (0..rank).map(|k| row[k] * datum.cartan(i - 1, k)).sum();
                row[i - 1] -= dot;
            }
        }
        Ok(WeylElement {
            rank,
            matrix: m,
            word: Some(word.to_vec()),
        })
    }

    /// The unique `w` with `w·ρ = v`.
    pub fn from_regular_image(datum: &RootDatum, v: &Weight) -> Result<Self> {
        v.check_rank(datum.rank())?;
        if !v.is_integral() {
            return Err(Error::NotInOrbit(v.to_string()));
        }
        let mut d = *v;
        let mut steps = Vec::new();
        let rank = datum.rank();
        let limit = datum.positive_roots().len();
        while let Some(i) = d.doubled().iter().position(|&x| x < 0) {
            datum.reflect_in_place(d.doubled_mut(), i);
            steps.push(i + 1);
            if steps.len() > limit {
                return Err(Error::NotInOrbit(v.to_string()));
            }
        }
        if d != datum.rho() {
            return Err(Error::NotInOrbit(v.to_string()));
        }
        debug_assert_eq!(d.rank(), rank);
        WeylElement::from_word(datum, &steps)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn word(&self) -> Option<&[usize]> {
        self.word.as_deref()
    }

    pub fn matrix_rows(&self) -> Vec<Vec<i32>> {
        (0..self.rank).map(|i| self.matrix[i][..self.rank].to_vec()).collect()
    }

    pub fn apply(&self, mu: &Weight) -> Weight {
        debug_assert_eq!(mu.rank(), self.rank);
        let d = mu.doubled();
        let mut out = Weight::zero(self.rank);
        for (i, o) in out.doubled_mut().iter_mut().enumerate() {
            *o = (0..self.rank).map(|j| self.matrix[i][j] * d[j]).sum();
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let word = match (&self.word, &other.word) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
            _ => None,
        };
        WeylElement {
            rank: self.rank,
            matrix: mat_mul(&self.matrix, &other.matrix, self.rank),
            word,
        }
    }

    /// `w⁻¹ = C · wᵀ · C⁻¹`, since `w` preserves the form with Gram matrix `C⁻¹`.
    pub fn inverse(&self, datum: &RootDatum) -> WeylElement {
        let r = self.rank;
        let adj = datum.adjugate();
        let det = datum.cartan_determinant();
        let mut out = [[0; MAX_RANK]; MAX_RANK];
        for i in 0..r {
            for j in 0..r {
                let mut acc = 0i64;
                for k in 0..r {
                    let ck = datum.cartan(i, k) as i64;
                    if ck == 0 {
                        continue;
                    }
                    for l in 0..r {
                        acc += ck * self.matrix[l][k] as i64 * adj[l][j];
                    }
                }
                debug_assert_eq!(acc % det, 0);
                out[i][j] = (acc / det) as i32;
            }
        }
        let word = self.word.as_ref().map(|w| w.iter().rev().copied().collect());
        WeylElement {
            rank: r,
            matrix: out,
            word,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == identity_matrix(self.rank)
    }

    pub fn is_involution(&self) -> bool {
        mat_mul(&self.matrix, &self.matrix, self.rank) == identity_matrix(self.rank)
    }

    /// `{ i : w·ϖ_i = ϖ_i }`, 1-based.
    pub fn fixed_set(&self) -> Vec<usize> {
        (0..self.rank)
            .filter(|&j| (0..self.rank).all(|i| self.matrix[i][j] == i32::from(i == j)))
            .map(|j| j + 1)
            .collect()
    }

    /// Checks `⟨wμ, wν⟩ = ⟨μ, ν⟩` on all pairs of fundamental weights.
    pub fn preserves_form(&self, datum: &RootDatum) -> bool {
        let r = self.rank;
        (1..=r).all(|i| {
            (1..=r).all(|j| {
                let a = Weight::fundamental(r, i);
                let b = Weight::fundamental(r, j);
                datum.inner_product(&self.apply(&a), &self.apply(&b)).ok() == datum.inner_product(&a, &b).ok()
            })
        })
    }

    /// Drops the stored word, e.g. when it is no longer meaningful.
    pub fn without_word(mut self) -> Self {
        self.word = None;
        self
    }

    /// A reduced word recovered from `w·ρ`.
    pub fn reduced_word(&self, datum: &RootDatum) -> Vec<usize> {
        let v = self.apply(&datum.rho());
        WeylElement::from_regular_image(datum, &v)
            .ok()
            .and_then(|w| w.word)
            .unwrap_or_default()
    }
}

/// `w·s·w⁻¹`.
pub fn conjugate(datum: &RootDatum, w: &WeylElement, s: &WeylElement) -> WeylElement {
    w.compose(s).compose(&w.inverse(datum))
}

/// An involution together with `s·ρ` and its fixed set `I(s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutionRecord {
    pub element: WeylElement,
    pub s_rho: Weight,
    pub fixed_set: Vec<usize>,
}

impl InvolutionRecord {
    pub fn new(datum: &RootDatum, element: WeylElement) -> Result<Self> {
        if !element.is_involution() {
            return Err(Error::NotInvolution);
        }
        let s_rho = element.apply(&datum.rho());
        let fixed_set = element.fixed_set();
        Ok(InvolutionRecord {
            element,
            s_rho,
            fixed_set,
        })
    }

    pub fn from_word(datum: &RootDatum, word: &[usize]) -> Result<Self> {
        InvolutionRecord::new(datum, WeylElement::from_word(datum, word)?)
    }

    pub fn from_srho(datum: &RootDatum, v: &Weight) -> Result<Self> {
        InvolutionRecord::new(datum, WeylElement::from_regular_image(datum, v)?)
    }

    pub fn rank(&self) -> usize {
        self.element.rank()
    }

    pub fn apply(&self, mu: &Weight) -> Weight {
        self.element.apply(mu)
    }

    pub fn is_scattered_type(&self) -> bool {
        self.fixed_set.is_empty()
    }
}

/// Diagram automorphism action, for weights, elements and parameters.
pub trait DiagramDual: Sized {
    fn diagram_dual(&self, datum: &RootDatum) -> Self;
}

impl DiagramDual for Weight {
    fn diagram_dual(&self, datum: &RootDatum) -> Self {
        datum.dual_weight(self)
    }
}

impl DiagramDual for WeylElement {
    fn diagram_dual(&self, datum: &RootDatum) -> Self {
        let p = datum.root_type().diagram_permutation();
        let mut m = [[0; MAX_RANK]; MAX_RANK];
        for i in 0..self.rank {
            for j in 0..self.rank {
                m[p[i]][p[j]] = self.matrix[i][j];
            }
        }
        let word = self.word.as_ref().map(|w| w.iter().map(|&i| p[i - 1] + 1).collect());
        WeylElement {
            rank: self.rank,
            matrix: m,
            word,
        }
    }
}

impl DiagramDual for InvolutionRecord {
    fn diagram_dual(&self, datum: &RootDatum) -> Self {
        let element = self.element.diagram_dual(datum);
        let s_rho = datum.dual_weight(&self.s_rho);
        let p = datum.root_type().diagram_permutation();
        let mut fixed_set: Vec<usize> = self.fixed_set.iter().map(|&i| p[i - 1] + 1).collect();
        fixed_set.sort_unstable();
        InvolutionRecord {
            element,
            s_rho,
            fixed_set,
        }
    }
}

type Point = [i8; MAX_RANK];

fn rho_point(rank: usize) -> Point {
    let mut p = [0i8; MAX_RANK];
    p[..rank].fill(1);
    p
}

#[inline]
fn reflect_point(datum: &RootDatum, p: &Point, i: usize) -> Point {
    let mut out = *p;
    let c = p[i] as i32;
    for (k, o) in out.iter_mut().enumerate().take(datum.rank()) {
        *o = (*o as i32 - c * datum.cartan(i, k)) as i8;
    }
    out
}

/// Children of `v` in the canonical spanning tree: `s_i v` with `v_i > 0`
/// such that `i` is the first negative coordinate of `s_i v`.
fn children(datum: &RootDatum, v: &Point, out: &mut Vec<Point>) {
    let r = datum.rank();
    for i in 0..r {
        if v[i] <= 0 {
            continue;
        }
        let c = reflect_point(datum, v, i);
        if c[..i].iter().all(|&x| x >= 0) {
            out.push(c);
        }
    }
}

/// Breadth-first traversal of the orbit of ρ by length; each level is
/// handed over sorted.
fn for_each_level(datum: &RootDatum, mut f: impl FnMut(&[Point])) {
    let mut level = vec![rho_point(datum.rank())];
    while !level.is_empty() {
        f(&level);
        let mut next: Vec<Point> = level
            .par_iter()
            .fold(Vec::new, |mut acc, v| {
                children(datum, v, &mut acc);
                acc
            })
            .flatten()
            .collect();
        next.par_sort_unstable();
        level = next;
    }
}

fn point_weight(rank: usize, p: &Point) -> Weight {
    let coords: Vec<i32> = p[..rank].iter().map(|&x| x as i32).collect();
    Weight::from_integral(&coords)
}

/// Visits `w·ρ` for every `w ∈ W` exactly once, ordered by length and then
/// lexicographically. Returns the group order.
pub fn enumerate_group(datum: &RootDatum, workers: usize, mut visitor: impl FnMut(&Weight) + Send) -> u64 {
    let rank = datum.rank();
    crate::with_workers(workers, || {
        let mut count = 0u64;
        for_each_level(datum, |level| {
            for p in level {
                visitor(&point_weight(rank, p));
            }
            count += level.len() as u64;
        });
        count
    })
}

/// Order of the Weyl group.
pub fn group_order(datum: &RootDatum, workers: usize) -> u64 {
    crate::with_workers(workers, || {
        let mut count = 0u64;
        for_each_level(datum, |level| count += level.len() as u64);
        count
    })
}

/// `w` is an involution iff `w·ρ = w⁻¹·ρ`. Reducing `v = w·ρ` to ρ applies
/// `w⁻¹`, so the same reflections carry ρ to `w⁻¹·ρ`.
fn is_involution_point(datum: &RootDatum, v: &Point) -> bool {
    let r = datum.rank();
    let mut cur = *v;
    let mut u = rho_point(r);
    while let Some(i) = cur[..r].iter().position(|&x| x < 0) {
        cur = reflect_point(datum, &cur, i);
        u = reflect_point(datum, &u, i);
    }
    u == *v
}

/// All involutions of `W`, sorted by `s·ρ`.
pub fn enumerate_involutions(datum: &RootDatum, workers: usize) -> Vec<InvolutionRecord> {
    let rank = datum.rank();
    crate::with_workers(workers, || {
        let mut points: Vec<Point> = Vec::new();
        for_each_level(datum, |level| {
            points.par_extend(level.par_iter().filter(|v| is_involution_point(datum, v)).copied());
        });
        let mut records: Vec<InvolutionRecord> = points
            .par_iter()
            .map(|p| {
                let v = point_weight(rank, p);
                InvolutionRecord::from_srho(datum, &v).expect("orbit point is an involution")
            })
            .collect();
        records.par_sort_unstable_by(|a, b| a.s_rho.cmp(&b.s_rho));
        records
    })
}

pub const CENSUS_HEADER: &str = "srho\tword\tfixed_set";

/// Writes the involution census as TSV.
pub fn write_census<W: Write>(records: &[InvolutionRecord], out: &mut W) -> Result<()> {
    writeln!(out, "{CENSUS_HEADER}")?;
    for rec in records {
        let word: Vec<i32> = rec.element.word().unwrap_or(&[]).iter().map(|&i| i as i32).collect();
        let fixed: Vec<i32> = rec.fixed_set.iter().map(|&i| i as i32).collect();
        writeln!(
            out,
            "{}\t{}\t{}",
            rec.s_rho.integral_coords().map(|c| join_ints(&c)).unwrap_or_default(),
            join_ints(&word),
            join_ints(&fixed)
        )?;
    }
    Ok(())
}

/// Reads a census written by [`write_census`], re-deriving every element
/// from its `srho` column and checking the other columns against it.
pub fn read_census<R: BufRead>(datum: &RootDatum, input: R) -> Result<Vec<InvolutionRecord>> {
    let mut lines = input.lines();
    match lines.next() {
        Some(Ok(h)) if h.trim_end() == CENSUS_HEADER => {}
        _ => return Err(Error::Data("missing census header".into())),
    }
    let mut records = Vec::new();
    for (n, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 3 {
            return Err(Error::Data(format!("census line {}: expected 3 columns", n + 2)));
        }
        let srho = datum.integral_weight(&parse_int_list(cols[0])?)?;
        let word: Vec<usize> = parse_int_list(cols[1])?.into_iter().map(|i| i as usize).collect();
        let fixed: Vec<usize> = parse_int_list(cols[2])?.into_iter().map(|i| i as usize).collect();
        let element = WeylElement::from_word(datum, &word)?;
        let rec = InvolutionRecord::new(datum, element)?;
        if rec.s_rho != srho || rec.fixed_set != fixed {
            return Err(Error::Data(format!("census line {}: columns disagree", n + 2)));
        }
        records.push(rec);
    }
    Ok(records)
}
