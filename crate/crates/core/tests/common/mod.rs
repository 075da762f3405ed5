#![allow(dead_code)]

use mbkit::descriptor::{CriticalSubmanifold, HomologySource, MorseBottDescriptor, OrientationSystem};
use mbkit::homology::{CellModel, SignCocycle};
use mbkit::morsify::{Choices, MorseVector};
use mbkit::IntPolynomial;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn poly(c: &[i64]) -> IntPolynomial {
    IntPolynomial::from_i64s(c)
}

/// Determinant by cofactor expansion; inputs here are at most 5x5.
pub fn det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0] as i128;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, &v)| v)
                        .collect()
                })
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] as i128 * det(&minor)
        })
        .sum()
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Elementary divisors from the gcds of `k x k` minors: `d_k = D_k / D_(k-1)`.
pub fn minors_oracle(m: &[Vec<i64>]) -> Vec<i128> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut prev = 1i128;
    for k in 1..=rows.min(cols) {
        let mut g = 0i128;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let sub: Vec<Vec<i64>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c]).collect()).collect();
                g = gcd(g, det(&sub));
            }
        }
        if g == 0 {
            break;
        }
        out.push(g / prev);
        prev = g;
    }
    out
}

pub fn random_matrix(rng: &mut impl Rng) -> Vec<Vec<i64>> {
    let rows = rng.gen_range(1..=5);
    let cols = rng.gen_range(1..=5);
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-4..=4)).collect())
        .collect()
}

/// A few random facets on up to 7 vertices, dimension at most 3.
pub fn random_complex(rng: &mut impl Rng) -> CellModel {
    let n: u32 = rng.gen_range(3..=7);
    let verts: Vec<u32> = (0..n).collect();
    let facets: Vec<Vec<u32>> = (0..rng.gen_range(1..=6))
        .map(|_| {
            let k = rng.gen_range(2..=4.min(n as usize));
            let mut f: Vec<u32> = verts.choose_multiple(rng, k).copied().collect();
            f.sort_unstable();
            f
        })
        .collect();
    CellModel::new(verts, facets).expect("random facets are valid")
}

/// A uniformly random element of the GF(2) kernel of the coboundary
/// `C^1 -> C^2`, read as a `±1` edge labelling.
pub fn random_cocycle(model: &CellModel, rng: &mut impl Rng) -> SignCocycle {
    let edges = model.cells(1).to_vec();
    let triangles = model.cells(2);
    let e = edges.len();
    let pos = |a: u32, b: u32| {
        edges
            .iter()
            .position(|x| x[0] == a && x[1] == b)
            .expect("edge of model")
    };
    let mut rows: Vec<Vec<u8>> = triangles
        .iter()
        .map(|t| {
            let mut r = vec![0u8; e];
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
                r[pos(a, b)] = 1;
            }
            r
        })
        .collect();

    // Row reduce, then build a nullspace basis from the free columns.
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..e {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] == 1) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i][c] == 1 {
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(pivot_row) {
                    *x ^= y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..e).filter(|c| !pivots.contains(c)).collect();
    let mut x = vec![0u8; e];
    for &f in &free {
        if rng.gen_bool(0.5) {
            x[f] ^= 1;
            for (i, &pc) in pivots.iter().enumerate() {
                x[pc] ^= rows[i][f];
            }
        }
    }
    SignCocycle::new(
        edges
            .iter()
            .zip(&x)
            .filter(|(_, &bit)| bit == 1)
            .map(|(edge, _)| (edge[0], edge[1], -1)),
    )
    .expect("edges are distinct")
}

pub fn random_poly(rng: &mut impl Rng, max_degree: usize, lo: i64, hi: i64) -> IntPolynomial {
    let len = rng.gen_range(0..=max_degree + 1);
    IntPolynomial::from_i64s(&(0..len).map(|_| rng.gen_range(lo..=hi)).collect::<Vec<_>>())
}

fn psub(name: String, dim: usize, index: usize, p: IntPolynomial) -> CriticalSubmanifold {
    CriticalSubmanifold {
        name,
        dim,
        index,
        topology: HomologySource::Polynomial(p),
        orientation_system: OrientationSystem::Oriented,
        oriented_bundle: true,
    }
}

fn palindrome(rng: &mut impl Rng, dim: usize) -> IntPolynomial {
    let mut c = vec![0i64; dim + 1];
    for k in 0..=dim / 2 {
        let v = if k == 0 { 1 } else { rng.gen_range(0..=2) };
        c[k] = v;
        c[dim - k] = v;
    }
    IntPolynomial::from_i64s(&c)
}

/// A valid descriptor with polynomial topologies and palindromic
/// submanifold polynomials, so every duality operation applies.
pub fn random_descriptor(rng: &mut impl Rng) -> MorseBottDescriptor {
    let m = rng.gen_range(1..=4);
    let mut names = (0..).map(|i| format!("c{i}"));
    let mut d = MorseBottDescriptor {
        name: "random".into(),
        ambient_dim: m,
        manifold_oriented: true,
        manifold_homology: HomologySource::Polynomial(random_poly(rng, m, 0, 3)),
        relative_homology: None,
        interior: vec![],
        boundary_n: vec![],
        boundary_d: vec![],
    };
    for _ in 0..rng.gen_range(0..=3) {
        let dim = rng.gen_range(0..m);
        let index = rng.gen_range(0..=m - dim);
        d.interior
            .push(psub(names.next().unwrap(), dim, index, palindrome(rng, dim)));
    }
    for _ in 0..rng.gen_range(0..=2) {
        let dim = rng.gen_range(0..m);
        let index = rng.gen_range(0..=m - 1 - dim);
        let s = psub(names.next().unwrap(), dim, index, palindrome(rng, dim));
        if rng.gen_bool(0.5) {
            d.boundary_n.push(s);
        } else {
            d.boundary_d.push(s);
        }
    }
    if d.interior.is_empty() && d.boundary_n.is_empty() && d.boundary_d.is_empty() {
        d.interior.push(psub(names.next().unwrap(), 0, 0, IntPolynomial::one()));
    }
    d
}

/// Admissible Morse vectors `P + (1 + t) R` with random `R >= 0`.
pub fn random_choices(d: &MorseBottDescriptor, rng: &mut impl Rng) -> Choices {
    let mut out = Choices::new();
    for (_, s) in d.submanifolds() {
        let p = s.twisted_poincare().unwrap();
        let mut r = if s.dim == 0 {
            IntPolynomial::zero()
        } else {
            random_poly(rng, s.dim - 1, 0, 2)
        };
        if p.is_zero() && r.is_zero() && s.dim > 0 {
            r = IntPolynomial::one();
        }
        let counts = p + IntPolynomial::one_plus_t() * r;
        let v: Vec<u64> = counts.coeffs().iter().map(|c| u64::try_from(c).unwrap()).collect();
        out.insert(s.name.clone(), MorseVector(v));
    }
    out
}
