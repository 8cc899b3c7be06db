//! Half-integral weights in the fundamental-weight basis.
//!
//! A [`Weight`] stores the coordinates of `2λ`, so every weight with
//! `2λ_i ∈ ℤ` is represented exactly and all arithmetic stays in `i32`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest rank handled by the fixed-size coordinate storage.
pub const MAX_RANK: usize = 8;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Weight {
    rank: u8,
    doubled: [i32; MAX_RANK],
}

impl Weight {
    pub fn zero(rank: usize) -> Self {
        assert!(rank <= MAX_RANK, "rank {rank} exceeds {MAX_RANK}");
        Weight {
            rank: rank as u8,
            doubled: [0; MAX_RANK],
        }
    }

    /// Builds a weight from the coordinates of `2λ`.
    pub fn from_doubled(doubled: &[i32]) -> Self {
        let mut w = Weight::zero(doubled.len());
        w.doubled[..doubled.len()].copy_from_slice(doubled);
        w
    }

    /// Builds an integral weight from its ϖ-coordinates.
    pub fn from_integral(coords: &[i32]) -> Self {
        let mut w = Weight::zero(coords.len());
        for (d, &c) in w.doubled.iter_mut().zip(coords) {
            *d = 2 * c;
        }
        w
    }

    /// The fundamental weight ϖ_i (1-based).
    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut w = Weight::zero(rank);
        w.doubled[i - 1] = 2;
        w
    }

    /// The weight with every ϖ-coordinate equal to `c/2`.
    pub fn constant_doubled(rank: usize, c: i32) -> Self {
        let mut w = Weight::zero(rank);
        w.doubled[..rank].fill(c);
        w
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.rank as usize
    }

    #[inline]
    pub fn doubled(&self) -> &[i32] {
        &self.doubled[..self.rank as usize]
    }

    #[inline]
    pub fn doubled_mut(&mut self) -> &mut [i32] {
        &mut self.doubled[..self.rank as usize]
    }

    pub fn is_integral(&self) -> bool {
        self.doubled().iter().all(|d| d % 2 == 0)
    }

    /// ϖ-coordinates, if the weight is integral.
    pub fn integral_coords(&self) -> Option<Vec<i32>> {
        self.is_integral()
            .then(|| self.doubled().iter().map(|d| d / 2).collect())
    }

    pub fn is_dominant(&self) -> bool {
        self.doubled().iter().all(|&d| d >= 0)
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.doubled().iter().all(|&d| d > 0)
    }

    pub fn is_zero(&self) -> bool {
        self.doubled().iter().all(|&d| d == 0)
    }

    /// Reorders coordinates: output coordinate `perm[i]` receives input coordinate `i`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut out = Weight::zero(self.rank());
        for (i, &d) in self.doubled().iter().enumerate() {
            out.doubled[perm[i]] = d;
        }
        out
    }

    pub(crate) fn check_rank(&self, rank: usize) -> Result<()> {
        if self.rank() == rank {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: rank,
                found: self.rank(),
            })
        }
    }

    /// Comma-separated ϖ-coordinates, halves written as `p/2`.
    pub fn to_csv(&self) -> String {
        self.doubled()
            .iter()
            .map(|&d| fmt_half(d))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Comma-separated doubled coordinates.
    pub fn to_doubled_csv(&self) -> String {
        join_ints(self.doubled())
    }
}

pub(crate) fn join_ints(v: &[i32]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn fmt_half(d: i32) -> String {
    if d % 2 == 0 {
        (d / 2).to_string()
    } else {
        format!("{d}/2")
    }
}

/// Parses comma-separated integers, as used for `srho` and `lambda2` columns.
pub fn parse_int_list(s: &str) -> Result<Vec<i32>> {
    let s = s.trim().trim_start_matches('[').trim_end_matches(']');
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i32>()
                .map_err(|e| Error::Data(format!("bad integer `{}`: {e}", t.trim())))
        })
        .collect()
}

impl FromStr for Weight {
    type Err = Error;

    /// Parses ϖ-coordinates such as `1,1/2,3/2`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('[').trim_end_matches(']');
        let mut doubled = Vec::new();
        for tok in s.split(',') {
            let tok = tok.trim();
            let d = match tok.split_once('/') {
                Some((num, "2")) => num.trim().parse::<i32>().ok(),
                Some(_) => None,
                None => tok.parse::<i32>().ok().map(|v| 2 * v),
            };
            doubled.push(d.ok_or_else(|| Error::Data(format!("bad coordinate `{tok}`")))?);
        }
        if doubled.len() > MAX_RANK {
            return Err(Error::Data(format!("too many coordinates in `{s}`")));
        }
        Ok(Weight::from_doubled(&doubled))
    }
}

impl PartialOrd for Weight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Weight {
    fn cmp(&self, other: &Self) -> Ordering {
        self.doubled().cmp(other.doubled())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<_> = self.doubled().iter().map(|&d| fmt_half(d)).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(mut self, rhs: Weight) -> Weight {
        debug_assert_eq!(self.rank, rhs.rank);
        for (a, b) in self.doubled.iter_mut().zip(rhs.doubled) {
            *a += b;
        }
        self
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(mut self, rhs: Weight) -> Weight {
        debug_assert_eq!(self.rank, rhs.rank);
        for (a, b) in self.doubled.iter_mut().zip(rhs.doubled) {
            *a -= b;
        }
        self
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(mut self) -> Weight {
        for a in self.doubled.iter_mut() {
            *a = -*a;
        }
        self
    }
}

impl Mul<Weight> for i32 {
    type Output = Weight;
    fn mul(self, mut rhs: Weight) -> Weight {
        for a in rhs.doubled.iter_mut() {
            *a *= self;
        }
        rhs
    }
}
