//! Naive dense reference implementations used as test oracles. Nothing here
//! shares code with the library's simulator.
#![allow(dead_code, clippy::needless_range_loop)]

use num_complex::Complex64;
use vqc_core::circuit::gate_unitary;
use vqc_core::statevec::Mat2;
use vqc_core::{Circuit, EntanglerKind, Pauli, PauliSum};

pub type Dense = Vec<Vec<Complex64>>;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn eye(dim: usize) -> Dense {
    (0..dim)
        .map(|r| (0..dim).map(|c| if r == c { ONE } else { ZERO }).collect())
        .collect()
}

pub fn kron(a: &Dense, b: &Dense) -> Dense {
    let (na, nb) = (a.len(), b.len());
    let mut out = vec![vec![ZERO; na * nb]; na * nb];
    for i in 0..na {
        for j in 0..na {
            for k in 0..nb {
                for l in 0..nb {
                    out[i * nb + k][j * nb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut out = vec![vec![ZERO; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == ZERO {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn matvec(a: &Dense, v: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn pauli_matrix(p: Option<Pauli>) -> Dense {
    match p {
        None => eye(2),
        Some(Pauli::X) => vec![vec![ZERO, ONE], vec![ONE, ZERO]],
        Some(Pauli::Y) => vec![vec![ZERO, -I], vec![I, ZERO]],
        Some(Pauli::Z) => vec![vec![ONE, ZERO], vec![ZERO, -ONE]],
    }
}

/// Kronecker product with qubit 0 leftmost.
pub fn embed_single(n: usize, qubit: usize, m: &Dense) -> Dense {
    let id = eye(2);
    let mut out = vec![vec![ONE]];
    for q in 0..n {
        out = kron(&out, if q == qubit { m } else { &id });
    }
    out
}

pub fn pauli_sum_matrix(sum: &PauliSum, n: usize) -> Dense {
    let dim = 1 << n;
    let mut h = vec![vec![ZERO; dim]; dim];
    for term in sum.terms() {
        let mut m = vec![vec![ONE]];
        for q in 0..n {
            m = kron(&m, &pauli_matrix(term.paulis.get(&q).copied()));
        }
        for i in 0..dim {
            for j in 0..dim {
                h[i][j] += m[i][j] * term.coeff;
            }
        }
    }
    h
}

fn two_qubit(n: usize, kind: EntanglerKind, a: usize, b: usize) -> Dense {
    let dim = 1 << n;
    let bit = |x: usize, q: usize| (x >> (n - 1 - q)) & 1;
    let mut m = vec![vec![ZERO; dim]; dim];
    for x in 0..dim {
        match kind {
            EntanglerKind::Cz => {
                m[x][x] = if bit(x, a) == 1 && bit(x, b) == 1 { -ONE } else { ONE };
            }
            EntanglerKind::Cnot => {
                let y = if bit(x, a) == 1 { x ^ (1 << (n - 1 - b)) } else { x };
                m[y][x] = ONE;
            }
        }
    }
    m
}

pub fn mat2_dense(m: &Mat2) -> Dense {
    vec![vec![m[0][0], m[0][1]], vec![m[1][0], m[1][1]]]
}

/// Full circuit unitary as an explicit product of embedded matrices.
pub fn circuit_unitary(c: &Circuit) -> Dense {
    let n = c.n_qubits();
    let mut u = eye(1 << n);
    for l in 0..c.n_layers() {
        for q in 0..n {
            let g = embed_single(n, q, &mat2_dense(&gate_unitary(c.gate(l * n + q))));
            u = matmul(&g, &u);
        }
        if l + 1 < c.n_layers() || c.entangle_last() {
            for sub in c.entangler().sub_layers() {
                for &(a, b) in sub {
                    u = matmul(&two_qubit(n, c.entangler().kind(), a, b), &u);
                }
            }
        }
    }
    u
}

pub fn expectation(h: &Dense, psi: &[Complex64]) -> f64 {
    let hp = matvec(h, psi);
    psi.iter().zip(&hp).map(|(a, b)| a.conj() * b).sum::<Complex64>().re
}

pub fn zero_state(n: usize) -> Vec<Complex64> {
    let mut v = vec![ZERO; 1 << n];
    v[0] = ONE;
    v
}

/// Real symmetric embedding `[[Re, -Im], [Im, Re]]` of a Hermitian matrix;
/// each eigenvalue appears twice.
pub fn real_embedding(h: &Dense) -> Vec<Vec<f64>> {
    let n = h.len();
    let mut out = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            out[i][j] = h[i][j].re;
            out[i + n][j + n] = h[i][j].re;
            out[i][j + n] = -h[i][j].im;
            out[i + n][j] = h[i][j].im;
        }
    }
    out
}
