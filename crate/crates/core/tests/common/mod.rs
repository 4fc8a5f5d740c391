//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use p1red::arith::{BinForm, IntPoly};
use p1red::map::RationalMap;
use p1red::monodromy::Permutation;

pub fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&c| BigInt::from(c)).collect()
}

/// Determinant by fraction-exact Gaussian elimination.
pub fn det(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut acc = BigRational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            acc = -acc;
        }
        acc *= m[col][col].clone();
        for r in col + 1..n {
            let f = &m[r][col] / &m[col][col];
            for c in col..n {
                let t = &f * &m[col][c];
                m[r][c] -= t;
            }
        }
    }
    acc
}

/// Sylvester resultant of `f` (degree `n`) and `g` (degree `m`), coefficients
/// listed from the constant term up, with respect to the formal degrees.
pub fn sylvester(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let (n, m) = (f.len() - 1, g.len() - 1);
    let size = n + m;
    if size == 0 {
        return BigInt::one();
    }
    let mut s = vec![vec![BigRational::zero(); size]; size];
    for row in 0..m {
        for (i, c) in f.iter().rev().enumerate() {
            s[row][row + i] = BigRational::from(c.clone());
        }
    }
    for row in 0..n {
        for (i, c) in g.iter().rev().enumerate() {
            s[m + row][row + i] = BigRational::from(c.clone());
        }
    }
    det(s).to_integer()
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let (mut b, mut e) = (a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn rem_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let b = trim(b.to_vec());
    let lb = inv_mod(*b.last().unwrap(), p);
    while a.len() >= b.len() && !(a.len() == 1 && a[0] == 0) {
        let shift = a.len() - b.len();
        let q = a.last().unwrap() * lb % p;
        for (i, c) in b.iter().enumerate() {
            a[shift + i] = (a[shift + i] + p - q * c % p) % p;
        }
        a = trim(a);
        if a.len() < b.len() {
            break;
        }
    }
    a
}

fn is_zero_poly(a: &[u64]) -> bool {
    a.iter().all(|&c| c == 0)
}

/// gcd over `F_p` of coefficient vectors (constant term first).
pub fn gcd_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !is_zero_poly(&b) {
        let r = rem_mod(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// A binary form over `F_p` is squarefree iff its dehomogenization is
/// squarefree and `(1:0)` is at most a simple root.
pub fn form_squarefree_mod(coeffs: &[BigInt], p: u64) -> bool {
    let pb = BigInt::from(p);
    let red: Vec<u64> = coeffs
        .iter()
        .map(|c| {
            let r = ((c % &pb) + &pb) % &pb;
            u64::try_from(r).unwrap()
        })
        .collect();
    let d = red.len() - 1;
    let f = trim(red);
    if is_zero_poly(&f) {
        return false;
    }
    let deg = f.len() - 1;
    if d - deg >= 2 {
        return false;
    }
    if deg == 0 {
        return true;
    }
    let df: Vec<u64> = (1..f.len()).map(|i| f[i] * (i as u64 % p) % p).collect();
    if is_zero_poly(&df) {
        return false;
    }
    gcd_mod(&f, &df, p).len() == 1
}

/// Order of the group generated by `gens`, by closing the set under multiplication.
pub fn closure_order(gens: &[Permutation]) -> usize {
    let n = gens[0].degree();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let id: Vec<usize> = (0..n).collect();
    seen.insert(id.clone());
    let mut stack = vec![id];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y: Vec<usize> = x.iter().map(|&i| g.apply(i)).collect();
            if seen.insert(y.clone()) {
                stack.push(y);
            }
        }
    }
    seen.len()
}

pub fn poly(v: &[i64]) -> IntPoly {
    IntPoly::from_i64(v)
}

pub fn form(v: &[i64]) -> BinForm {
    BinForm::from_i64(v)
}

/// Nonzero integer polynomial of degree at most `deg` with small coefficients.
pub fn small_poly(deg: usize, bound: i64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-bound..=bound, 1..=deg + 1).prop_filter("nonzero", |v| v.iter().any(|&c| c != 0))
}

/// Maps `num/den` of degree between `lo` and `hi`, coefficients in `[-bound, bound]`.
pub fn small_map(lo: usize, hi: usize, bound: i64) -> impl Strategy<Value = RationalMap> {
    (small_poly(hi, bound), small_poly(hi, bound)).prop_filter_map("degree in range", move |(a, b)| {
        let m = RationalMap::from_polys(&poly(&a), &poly(&b)).ok()?;
        (lo..=hi).contains(&m.degree()).then_some(m)
    })
}

/// Primes up to 50.
pub const PRIMES_50: [u64; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

pub fn prime_50() -> impl Strategy<Value = u64> {
    prop::sample::select(PRIMES_50.to_vec())
}
