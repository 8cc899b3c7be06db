//! Candidate sieve for scattered Dirac series: for an involution `s` with
//! `I(s)` empty, all `λ ∈ Λ(s)` with `‖λ−sλ‖² ≤ B` and `‖2λ‖ ≤ P_{λ+sλ}`.
//!
//! Writing `m = 2λ`, the quantity `‖λ−sλ‖² = mᵀKm/2` with `K = C⁻¹(I−S)`.
//! Column `j` of `K` holds the simple-root coefficients of `ϖ_j − sϖ_j`, so
//! every entry is nonnegative and the form is monotone in each coordinate
//! on the positive orthant. A depth-first search that holds unassigned
//! coordinates at their minimum `1` is therefore exact.

use std::collections::HashMap;

use dashmap::DashMap;
use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::rootsystem::{RootDatum, RootType};
use crate::spinnorm::{pencil_min, pencil_min_scaled};
use crate::weight::{Weight, MAX_RANK};
use crate::weylgroup::{enumerate_involutions, DiagramDual, InvolutionRecord};
use crate::Rational;

/// Doubled coordinates above this value mark a report as truncated.
pub const HARD_CAP: i32 = 64;

/// The pair `(λ, −sλ)` with its derived weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parameter {
    pub s: InvolutionRecord,
    pub lambda: Weight,
    pub lambda_plus: Weight,
    pub lambda_minus: Weight,
    pub lkt: Weight,
}

impl Parameter {
    pub fn new(datum: &RootDatum, s: InvolutionRecord, lambda: Weight) -> Result<Self> {
        lambda.check_rank(datum.rank())?;
        let s_lambda = s.apply(&lambda);
        let lambda_plus = lambda + s_lambda;
        let lambda_minus = lambda - s_lambda;
        let lkt = datum.dominant_conjugate(&lambda_plus);
        Ok(Parameter {
            s,
            lambda,
            lambda_plus,
            lambda_minus,
            lkt,
        })
    }

    pub fn in_lambda_s(&self, datum: &RootDatum) -> bool {
        lambda_in_lambda_s(datum, &self.s, &self.lambda)
    }
}

impl DiagramDual for Parameter {
    fn diagram_dual(&self, datum: &RootDatum) -> Self {
        Parameter {
            s: self.s.diagram_dual(datum),
            lambda: self.lambda.diagram_dual(datum),
            lambda_plus: self.lambda_plus.diagram_dual(datum),
            lambda_minus: self.lambda_minus.diagram_dual(datum),
            lkt: self.lkt.diagram_dual(datum),
        }
    }
}

/// `2λ_i ≥ 1`, `λ+sλ` integral, and `λ−sλ ∈ ℕ`-span of the simple roots.
pub fn lambda_in_lambda_s(datum: &RootDatum, s: &InvolutionRecord, lambda: &Weight) -> bool {
    if lambda.rank() != datum.rank() || !lambda.is_strictly_positive() {
        return false;
    }
    let s_lambda = s.apply(lambda);
    if !(*lambda + s_lambda).is_integral() {
        return false;
    }
    let q = 2 * datum.cartan_determinant();
    datum
        .simple_coords_scaled(&(*lambda - s_lambda))
        .iter()
        .all(|&c| c >= 0 && c % q == 0)
}

/// Default cap on `‖λ−sλ‖²`: 464 for `E_7`, otherwise `‖2ρ‖²`.
pub fn default_bound(datum: &RootDatum) -> Rational {
    match datum.root_type() {
        RootType::E7 => Rational::from_integer(464),
        _ => datum.norm_sq(&(2 * datum.rho())),
    }
}

#[derive(Debug, Clone)]
pub struct SieveReport {
    pub s: InvolutionRecord,
    pub candidates: Vec<Parameter>,
    pub bound_b: Rational,
    /// Largest doubled value reachable per coordinate under the bound.
    pub enumeration_box: Vec<i32>,
    pub truncated: bool,
    /// Lattice points inside the bound that satisfy the congruence conditions.
    pub leaves: u64,
}

impl SieveReport {
    /// One JSON object, without a trailing newline.
    pub fn to_json_line(&self) -> String {
        let candidates: Vec<_> = self
            .candidates
            .iter()
            .map(|p| {
                json!({
                    "lambda2": p.lambda.doubled(),
                    "lkt": p.lkt.integral_coords().unwrap_or_default(),
                })
            })
            .collect();
        json!({
            "srho": self.s.s_rho.integral_coords().unwrap_or_default(),
            "candidates": candidates,
            "truncated": self.truncated,
        })
        .to_string()
    }
}

/// Memoized pencil minima keyed by the dominant starting K-type.
#[derive(Default)]
pub struct PencilCache {
    map: DashMap<Weight, i64>,
}

impl PencilCache {
    pub fn new() -> Self {
        Self::default()
    }

    fn get(&self, datum: &RootDatum, delta: &Weight) -> i64 {
        if let Some(v) = self.map.get(delta) {
            return *v;
        }
        let v = pencil_min_scaled(datum, delta).0;
        *self.map.entry(*delta).or_insert(v)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SieveOptions {
    /// Applies the necessary condition `‖λ−sλ‖² ≤ 4‖ρ‖(‖λ+sλ‖+‖ρ‖)` before
    /// the pencil scan.
    pub cheap_prune: bool,
}

impl Default for SieveOptions {
    fn default() -> Self {
        SieveOptions { cheap_prune: true }
    }
}

type Vector = [i64; MAX_RANK];
type Matrix = [[i64; MAX_RANK]; MAX_RANK];

struct Search<'a> {
    datum: &'a RootDatum,
    s: &'a InvolutionRecord,
    rank: usize,
    // I + S
    plus_mat: Matrix,
    // det · K = adj(C)·(I − S), symmetric with nonnegative entries
    kmat: Matrix,
    adj: Matrix,
    // mᵀ kmat m ≤ cap_num / cap_den
    cap_num: i128,
    cap_den: i128,
    two_det: i64,
    rho_sq: i64,
    cache: &'a PencilCache,
    opts: SieveOptions,
    caps: Vec<i32>,
}

/// Running values for the current `m`, updated in `O(rank)` per step.
#[derive(Clone)]
struct State {
    m: Vector,
    // (I+S)m, the doubled coordinates of 2(λ+sλ)/2
    plus: Vector,
    // det·K·m, so λ−sλ has simple-root coordinates kvec / (2·det)
    kvec: Vector,
    // adj·m
    avec: Vector,
    // mᵀ·det·K·m
    q: i64,
    // mᵀ·adj·m
    norm: i64,
}

#[derive(Default)]
struct Accumulator {
    out: Vec<Parameter>,
    leaves: u64,
    pencils: HashMap<[i32; MAX_RANK], i64>,
}

impl<'a> Search<'a> {
    fn new(
        datum: &'a RootDatum,
        s: &'a InvolutionRecord,
        bound: Rational,
        cache: &'a PencilCache,
        opts: SieveOptions,
    ) -> Self {
        let rank = datum.rank();
        let rows = s.element.matrix_rows();
        let mut smat = [[0i64; MAX_RANK]; MAX_RANK];
        let mut plus_mat = [[0i64; MAX_RANK]; MAX_RANK];
        for i in 0..rank {
            for j in 0..rank {
                smat[i][j] = rows[i][j] as i64;
                plus_mat[i][j] = i64::from(i == j) + smat[i][j];
            }
        }
        let adj = *datum.adjugate();
        let mut kmat = [[0i64; MAX_RANK]; MAX_RANK];
        for i in 0..rank {
            for j in 0..rank {
                kmat[i][j] = (0..rank).map(|k| adj[i][k] * (i64::from(k == j) - smat[k][j])).sum();
            }
        }
        let det = datum.cartan_determinant();
        // mᵀKm/2 ≤ B  ⇔  mᵀ(det·K)m · denom(B) ≤ 2·det·numer(B)
        let cap_num = 2 * det as i128 * *bound.numer() as i128;
        let cap_den = *bound.denom() as i128;
        let rho = datum.rho();
        let mut search = Search {
            datum,
            s,
            rank,
            plus_mat,
            kmat,
            adj,
            cap_num,
            cap_den,
            two_det: 2 * det,
            rho_sq: datum.scaled_inner(rho.doubled(), rho.doubled()),
            cache,
            opts,
            caps: Vec::new(),
        };
        search.caps = (0..rank).map(|j| search.coordinate_cap(j)).collect();
        search
    }

    fn state(&self, m: Vector) -> State {
        let r = self.rank;
        let mut st = State {
            m,
            plus: [0; MAX_RANK],
            kvec: [0; MAX_RANK],
            avec: [0; MAX_RANK],
            q: 0,
            norm: 0,
        };
        for i in 0..r {
            for j in 0..r {
                st.plus[i] += self.plus_mat[i][j] * m[j];
                st.kvec[i] += self.kmat[i][j] * m[j];
                st.avec[i] += self.adj[i][j] * m[j];
            }
        }
        st.q = (0..r).map(|i| m[i] * st.kvec[i]).sum();
        st.norm = (0..r).map(|i| m[i] * st.avec[i]).sum();
        st
    }

    /// `m_j += delta`.
    #[inline]
    fn shift(&self, st: &mut State, j: usize, delta: i64) {
        st.q += delta * (2 * st.kvec[j] + delta * self.kmat[j][j]);
        st.norm += delta * (2 * st.avec[j] + delta * self.adj[j][j]);
        for i in 0..self.rank {
            st.plus[i] += delta * self.plus_mat[i][j];
            st.kvec[i] += delta * self.kmat[i][j];
            st.avec[i] += delta * self.adj[i][j];
        }
        st.m[j] += delta;
    }

    #[inline]
    fn exceeds(&self, q: i64) -> bool {
        q as i128 * self.cap_den > self.cap_num
    }

    /// Largest `m_j` with the other coordinates at 1 still inside the bound.
    fn coordinate_cap(&self, j: usize) -> i32 {
        let mut st = self.state([1; MAX_RANK]);
        let mut v = 0;
        while !self.exceeds(st.q) && v < HARD_CAP {
            self.shift(&mut st, j, 1);
            v += 1;
        }
        v
    }

    fn truncated(&self) -> bool {
        self.caps.iter().any(|&c| c >= HARD_CAP)
    }

    /// Assigns coordinate `j`; `m[j..]` are all 1 on entry and on exit.
    fn dfs(&self, st: &mut State, j: usize, acc: &mut Accumulator) {
        if j + 1 == self.rank {
            self.last_coordinate(st, acc);
            return;
        }
        let mut v = 1;
        loop {
            if self.exceeds(st.q) {
                break;
            }
            self.dfs(st, j + 1, acc);
            if v == self.caps[j] {
                break;
            }
            self.shift(st, j, 1);
            v += 1;
        }
        self.shift(st, j, 1 - v as i64);
    }

    /// The congruences on `λ+sλ` and `λ−sλ` are linear in the last
    /// coordinate, so only residues mod `2·det` that satisfy them are walked.
    fn last_coordinate(&self, st: &mut State, acc: &mut Accumulator) {
        let r = self.rank;
        let l = r - 1;
        self.shift(st, l, -1);
        let modulus = self.two_det;
        let divides = |x: i64| {
            if modulus & (modulus - 1) == 0 {
                x & (modulus - 1) == 0
            } else {
                x % modulus == 0
            }
        };
        let cap = self.caps[l] as i64;
        for v0 in 1..=modulus.min(cap) {
            let ok = (0..r).all(|i| {
                (st.plus[i] + v0 * self.plus_mat[i][l]) & 1 == 0 && divides(st.kvec[i] + v0 * self.kmat[i][l])
            });
            if !ok {
                continue;
            }
            let mut v = v0;
            while v <= cap {
                let q = st.q + v * (2 * st.kvec[l] + v * self.kmat[l][l]);
                if self.exceeds(q) {
                    break;
                }
                acc.leaves += 1;
                let norm = st.norm + v * (2 * st.avec[l] + v * self.adj[l][l]);
                if let Some(p) = self.accept(st, v, q, norm, &mut acc.pencils) {
                    acc.out.push(p);
                }
                v += modulus;
            }
        }
        self.shift(st, l, 1);
    }

    /// Norm tests for `m` with last coordinate `v`; the congruences hold.
    fn accept(
        &self,
        st: &State,
        v: i64,
        q: i64,
        norm: i64,
        pencils: &mut HashMap<[i32; MAX_RANK], i64>,
    ) -> Option<Parameter> {
        let r = self.rank;
        let l = r - 1;
        // scaled by 4·det: ‖λ−sλ‖² ↦ 2q and ‖2λ‖² ↦ 4·norm
        let a = 2 * q;
        let two_lambda_sq = 4 * norm;
        if self.opts.cheap_prune {
            let p = (two_lambda_sq - a) as i128;
            let excess = (a - 4 * self.rho_sq) as i128;
            if excess > 0 && excess * excess > 16 * self.rho_sq as i128 * p {
                return None;
            }
        }
        let mut key = [0i32; MAX_RANK];
        for i in 0..r {
            key[i] = (st.plus[i] + v * self.plus_mat[i][l]) as i32;
        }
        // λ+sλ repeats along the −1 eigenspace of s
        let pencil = *pencils.entry(key).or_insert_with(|| {
            let delta = self.datum.dominant_conjugate(&Weight::from_doubled(&key[..r]));
            self.cache.get(self.datum, &delta)
        });
        if two_lambda_sq > pencil {
            return None;
        }
        let mut lambda = [0i32; MAX_RANK];
        for i in 0..r {
            lambda[i] = st.m[i] as i32;
        }
        lambda[l] = v as i32;
        Parameter::new(self.datum, self.s.clone(), Weight::from_doubled(&lambda[..r])).ok()
    }

    fn run(&self) -> (Vec<Parameter>, u64) {
        let r = self.rank;
        let mut parts: Vec<Accumulator> = if r == 1 {
            let mut acc = Accumulator::default();
            self.dfs(&mut self.state([1; MAX_RANK]), 0, &mut acc);
            vec![acc]
        } else {
            (1..=self.caps[0] as i64)
                .into_par_iter()
                .map(|v| {
                    let mut m = [1i64; MAX_RANK];
                    m[0] = v;
                    let mut st = self.state(m);
                    let mut acc = Accumulator::default();
                    if !self.exceeds(st.q) {
                        self.dfs(&mut st, 1, &mut acc);
                    }
                    acc
                })
                .collect()
        };
        let leaves = parts.iter().map(|a| a.leaves).sum();
        let mut all: Vec<Parameter> = parts.iter_mut().flat_map(|a| a.out.drain(..)).collect();
        all.sort_by_key(|p| p.lambda);
        (all, leaves)
    }
}

pub fn enumerate_candidates(datum: &RootDatum, s: &InvolutionRecord, bound_b: Rational) -> Result<SieveReport> {
    enumerate_candidates_with(datum, s, bound_b, &PencilCache::new(), SieveOptions::default())
}

pub fn enumerate_candidates_with(
    datum: &RootDatum,
    s: &InvolutionRecord,
    bound_b: Rational,
    cache: &PencilCache,
    opts: SieveOptions,
) -> Result<SieveReport> {
    s.s_rho.check_rank(datum.rank())?;
    if !s.fixed_set.is_empty() {
        return Err(Error::FixedWeights(s.fixed_set.clone()));
    }
    if bound_b <= Rational::from_integer(0) {
        return Err(Error::Data(format!("bound must be positive, got {bound_b}")));
    }
    let search = Search::new(datum, s, bound_b, cache, opts);
    let truncated = search.truncated();
    let (candidates, leaves) = search.run();
    Ok(SieveReport {
        s: s.clone(),
        candidates,
        bound_b,
        enumeration_box: search.caps.clone(),
        truncated,
        leaves,
    })
}

/// Runs the sieve for every involution with empty `I(s)`, sorted by `s·ρ`.
pub fn sieve_all(datum: &RootDatum, bound_b: Rational, workers: usize) -> Result<Vec<SieveReport>> {
    let cache = PencilCache::new();
    crate::with_workers(workers, || {
        let involutions: Vec<InvolutionRecord> = enumerate_involutions(datum, 0)
            .into_iter()
            .filter(|r| r.fixed_set.is_empty())
            .collect();
        involutions
            .par_iter()
            .map(|s| enumerate_candidates_with(datum, s, bound_b, &cache, SieveOptions::default()))
            .collect()
    })
}

/// Independent re-check of a candidate with rational arithmetic only.
/// Returns the first violated condition.
pub fn validate_candidate(
    datum: &RootDatum,
    s: &InvolutionRecord,
    lambda: &Weight,
    bound_b: Rational,
) -> std::result::Result<(), String> {
    if lambda.doubled().iter().any(|&d| d < 1) {
        return Err("coordinate of λ below 1/2".into());
    }
    let s_lambda = s.element.apply(lambda);
    let plus = *lambda + s_lambda;
    let minus = *lambda - s_lambda;
    if plus.integral_coords().is_none() {
        return Err("λ+sλ not integral".into());
    }
    let coeffs = datum.to_simple_root_basis(&minus);
    if coeffs.iter().any(|c| !c.is_integer() || *c < Rational::from_integer(0)) {
        return Err("λ−sλ not an ℕ-combination of simple roots".into());
    }
    let ip = |a: &Weight, b: &Weight| datum.inner_product(a, b).map_err(|e| e.to_string());
    if ip(&minus, &minus)? > bound_b {
        return Err("‖λ−sλ‖² exceeds bound".into());
    }
    let (delta, _) = datum.make_dominant(&plus);
    let pencil = pencil_min(datum, &delta).map_err(|e| e.to_string())?;
    let two_lambda = 2 * *lambda;
    if ip(&two_lambda, &two_lambda)? > pencil.result_min_norm_sq {
        return Err("‖2λ‖ exceeds pencil minimum".into());
    }
    Ok(())
}
