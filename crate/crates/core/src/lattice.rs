//! LLL reduction and Fincke–Pohst enumeration for the lattice
//! `{(u, M * L(u)) : u in Z^d}` attached to one linear form `L`.
//!
//! Reduction runs on `f64` Gram–Schmidt data, but the unimodular transform is
//! kept exactly and every embedded vector is recomputed from it, so rounding
//! can only cost speed, never lattice membership.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::dyadic::scaled_to_f64;
use crate::error::{Error, Result};

pub struct FormLattice {
    weights: Vec<BigInt>,
    scale: u32,
    multiplier: f64,
    basis: Vec<Vec<i128>>,
}

struct Gso {
    mu: Vec<Vec<f64>>,
    norms: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gso(b: &[Vec<f64>]) -> Gso {
    let d = b.len();
    let mut star: Vec<Vec<f64>> = Vec::with_capacity(d);
    let mut mu = vec![vec![0.0; d]; d];
    let mut norms = vec![0.0; d];
    for i in 0..d {
        let mut v = b[i].clone();
        for j in 0..i {
            let m = if norms[j] > 0.0 { dot(&b[i], &star[j]) / norms[j] } else { 0.0 };
            mu[i][j] = m;
            for (x, y) in v.iter_mut().zip(&star[j]) {
                *x -= m * y;
            }
        }
        norms[i] = dot(&v, &v);
        mu[i][i] = 1.0;
        star.push(v);
    }
    Gso { mu, norms }
}

fn overflow() -> Error {
    Error::Internal("lattice transform left the i128 range".into())
}

fn axpy(u: &mut [i128], r: i128, v: &[i128]) -> Result<()> {
    for (x, y) in u.iter_mut().zip(v) {
        *x = x
            .checked_sub(r.checked_mul(*y).ok_or_else(overflow)?)
            .ok_or_else(overflow)?;
    }
    Ok(())
}

impl FormLattice {
    /// `L(u) = sum u_i weights_i / 2^scale`; starts from the identity basis.
    pub fn new(weights: Vec<BigInt>, scale: u32, multiplier: f64) -> Self {
        let d = weights.len();
        let basis = (0..d)
            .map(|i| (0..d).map(|j| i128::from(i == j)).collect())
            .collect();
        FormLattice {
            weights,
            scale,
            multiplier,
            basis,
        }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn basis(&self) -> &[Vec<i128>] {
        &self.basis
    }

    /// `L(u)` evaluated exactly, then rounded once.
    pub fn form(&self, u: &[i128]) -> f64 {
        let s: BigInt = u
            .iter()
            .zip(&self.weights)
            .map(|(a, w)| w * BigInt::from(*a))
            .sum();
        scaled_to_f64(&s, self.scale)
    }

    fn embed(&self, u: &[i128]) -> Vec<f64> {
        let mut v: Vec<f64> = u.iter().map(|&a| a as f64).collect();
        v.push(self.multiplier * self.form(u));
        v
    }

    /// LLL with `delta = 0.99`.
    pub fn reduce(&mut self) -> Result<()> {
        let d = self.dim();
        let mut emb: Vec<Vec<f64>> = self.basis.iter().map(|u| self.embed(u)).collect();
        let mut k = 1;
        let mut guard = 0u32;
        while k < d {
            guard += 1;
            if guard > 200_000 {
                return Err(Error::Internal("lattice reduction did not terminate".into()));
            }
            for _ in 0..8 {
                let g = gso(&emb);
                let mut changed = false;
                let mut row = g.mu[k].clone();
                for j in (0..k).rev() {
                    let r = libm::round(row[j]);
                    if r != 0.0 {
                        if r.abs() > 1e30 {
                            return Err(overflow());
                        }
                        let ri = r as i128;
                        let uj = self.basis[j].clone();
                        axpy(&mut self.basis[k], ri, &uj)?;
                        for i in 0..=j {
                            row[i] -= r * g.mu[j][i];
                        }
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
                emb[k] = self.embed(&self.basis[k]);
            }
            let g = gso(&emb);
            let m = g.mu[k][k - 1];
            if g.norms[k] >= (0.99 - m * m) * g.norms[k - 1] {
                k += 1;
            } else {
                self.basis.swap(k, k - 1);
                emb.swap(k, k - 1);
                k = (k - 1).max(1);
            }
        }
        Ok(())
    }

    /// Visit every lattice vector of squared length at most `radius_sq`,
    /// passing its coefficient vector `u`. Counts search-tree nodes against
    /// `budget`.
    pub fn enumerate<F: FnMut(&[i128])>(&self, radius_sq: f64, budget: u64, mut visit: F) -> Result<u64> {
        let d = self.dim();
        let emb: Vec<Vec<f64>> = self.basis.iter().map(|u| self.embed(u)).collect();
        let g = gso(&emb);
        if g.norms.iter().any(|&b| !(b > 0.0)) {
            return Err(Error::Internal("degenerate lattice basis".into()));
        }
        let mut st = Enum {
            g: &g,
            basis: &self.basis,
            y: vec![0i64; d],
            acc: vec![vec![0i128; d]; d + 1],
            nodes: 0,
            budget,
        };
        st.level(d, 0.0, radius_sq, &mut visit)?;
        Ok(st.nodes)
    }
}

struct Enum<'a> {
    g: &'a Gso,
    basis: &'a [Vec<i128>],
    y: Vec<i64>,
    /// `acc[i] = sum_{j >= i} y_j basis_j`
    acc: Vec<Vec<i128>>,
    nodes: u64,
    budget: u64,
}

impl Enum<'_> {
    fn level<F: FnMut(&[i128])>(&mut self, i: usize, used: f64, r2: f64, visit: &mut F) -> Result<()> {
        if i == 0 {
            visit(&self.acc[0]);
            return Ok(());
        }
        let l = i - 1;
        let d = self.y.len();
        let c: f64 = -(l + 1..d).map(|j| self.g.mu[j][l] * self.y[j] as f64).sum::<f64>();
        let room = (r2 - used).max(0.0) / self.g.norms[l];
        let w = libm::sqrt(room) * (1.0 + 1e-12) + 1e-9;
        let lo = libm::ceil(c - w);
        let hi = libm::floor(c + w);
        if hi - lo > 1e12 {
            return Err(Error::BudgetExceeded { budget: self.budget });
        }
        let mut t = lo;
        while t <= hi {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExceeded { budget: self.budget });
            }
            let part = used + self.g.norms[l] * (t - c) * (t - c);
            if part <= r2 * (1.0 + 1e-12) + 1e-9 {
                let ti = t as i64;
                self.y[l] = ti;
                let (above, here) = self.acc.split_at_mut(l + 1);
                let src = &here[0];
                let dst = &mut above[l];
                for (k, v) in dst.iter_mut().enumerate() {
                    *v = src[k]
                        .checked_add((ti as i128).checked_mul(self.basis[l][k]).ok_or_else(overflow)?)
                        .ok_or_else(overflow)?;
                }
                self.level(l, part, r2, visit)?;
            }
            t += 1.0;
        }
        self.y[l] = 0;
        Ok(())
    }
}
