use super::matrix::{CMatrix, ZERO};
use crate::{Error, Result};

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let x = a[(i, j)];
            if x == ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = x * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn kron_all(factors: &[&CMatrix]) -> CMatrix {
    let mut acc = CMatrix::identity(1);
    for f in factors {
        acc = kron(&acc, f);
    }
    acc
}

fn check_square_dims(a: &CMatrix, dims: &[usize]) -> Result<usize> {
    let n: usize = dims.iter().product();
    if a.rows() != n || a.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix against subsystem dims {:?}",
            a.rows(),
            a.cols(),
            dims
        )));
    }
    Ok(n)
}

/// Trace out subsystem `which` (0 or 1) of a bipartite operator.
pub fn partial_trace(a: &CMatrix, which: usize, dims: (usize, usize)) -> Result<CMatrix> {
    let keep = match which {
        0 => [1usize],
        1 => [0usize],
        _ => return Err(Error::InvalidParameter(format!("subsystem index {which} out of range"))),
    };
    reduce(a, &[dims.0, dims.1], &keep)
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

fn digits(mut idx: usize, dims: &[usize], out: &mut [usize]) {
    for k in (0..dims.len()).rev() {
        out[k] = idx % dims[k];
        idx /= dims[k];
    }
}

/// Reduced operator on the subsystems listed in `keep` (kept in the given order).
pub fn reduce(a: &CMatrix, dims: &[usize], keep: &[usize]) -> Result<CMatrix> {
    let n = check_square_dims(a, dims)?;
    if keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::InvalidParameter("kept subsystem out of range".into()));
    }
    let kd: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let m: usize = kd.iter().product();
    let ks = strides(&kd);
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
    let st = strides(dims);
    let mut out = CMatrix::zeros(m, m);
    let mut di = vec![0; dims.len()];
    for i in 0..n {
        digits(i, dims, &mut di);
        let oi: usize = keep.iter().zip(&ks).map(|(&k, &s)| di[k] * s).sum();
        // Partner index j shares traced digits with i; loop over kept digits of j.
        let base: usize = traced.iter().map(|&t| di[t] * st[t]).sum();
        let mut dj = vec![0; keep.len()];
        for oj in 0..m {
            digits(oj, &kd, &mut dj);
            let j = base + keep.iter().zip(&dj).map(|(&k, &d)| d * st[k]).sum::<usize>();
            out[(oi, oj)] += a[(i, j)];
        }
    }
    Ok(out)
}

/// Partial transpose on subsystem `which` of a bipartite operator.
pub fn partial_transpose(a: &CMatrix, which: usize, dims: (usize, usize)) -> Result<CMatrix> {
    let (d1, d2) = dims;
    check_square_dims(a, &[d1, d2])?;
    if which > 1 {
        return Err(Error::InvalidParameter(format!("subsystem index {which} out of range")));
    }
    let n = d1 * d2;
    Ok(CMatrix::from_fn(n, n, |row, col| {
        let (i, k) = (row / d2, row % d2);
        let (j, l) = (col / d2, col % d2);
        if which == 0 {
            a[(j * d2 + k, i * d2 + l)]
        } else {
            a[(i * d2 + l, j * d2 + k)]
        }
    }))
}

/// Reorder tensor factors: output factor `k` is input factor `perm[k]`.
pub fn permute_systems(a: &CMatrix, dims: &[usize], perm: &[usize]) -> Result<CMatrix> {
    let n = check_square_dims(a, dims)?;
    let mut seen = vec![false; dims.len()];
    if perm.len() != dims.len() || perm.iter().any(|&p| p >= dims.len() || std::mem::replace(&mut seen[p], true)) {
        return Err(Error::InvalidParameter(format!("{perm:?} is not a permutation")));
    }
    let map = permutation_index_map(dims, perm);
    let mut out = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[(map[i], map[j])] = a[(i, j)];
        }
    }
    Ok(out)
}

/// `map[i]` is the position of input basis index `i` after permuting factors.
pub fn permutation_index_map(dims: &[usize], perm: &[usize]) -> Vec<usize> {
    let n: usize = dims.iter().product();
    let pd: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let ps = strides(&pd);
    let mut d = vec![0; dims.len()];
    (0..n)
        .map(|i| {
            digits(i, dims, &mut d);
            perm.iter().zip(&ps).map(|(&p, &s)| d[p] * s).sum()
        })
        .collect()
}

/// Apply the permutation of factors to the rows of an operator with `dims` row structure.
pub fn permute_rows(a: &CMatrix, dims: &[usize], perm: &[usize]) -> Result<CMatrix> {
    let n: usize = dims.iter().product();
    if a.rows() != n {
        return Err(Error::DimensionMismatch("row dims do not factor".into()));
    }
    let map = permutation_index_map(dims, perm);
    let mut out = CMatrix::zeros(a.rows(), a.cols());
    for i in 0..n {
        for j in 0..a.cols() {
            out[(map[i], j)] = a[(i, j)];
        }
    }
    Ok(out)
}
