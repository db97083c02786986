use super::{ArithError, Field};

fn check_square<F: Field>(matrix: &[Vec<F>], rhs: &[F]) -> Result<usize, ArithError> {
    let n = matrix.len();
    if rhs.len() != n || matrix.iter().any(|row| row.len() != n) {
        return Err(ArithError::DimensionMismatch(format!(
            "expected {n}x{n} matrix with {n} right-hand sides"
        )));
    }
    let first = matrix.iter().flatten().chain(rhs).next();
    if let Some(f) = first {
        if !matrix.iter().flatten().chain(rhs).all(|e| e.same_field(f)) {
            return Err(ArithError::MixedFields);
        }
    }
    Ok(n)
}

/// Solves `matrix * x = rhs` exactly by fraction-free (Bareiss) elimination.
///
/// Rows are first scaled to integral entries where the field supports it,
/// so every intermediate value is a minor of the scaled system. Pivots are
/// chosen among the nonzero candidates with the smallest bit size.
pub fn solve_linear_system<F: Field>(matrix: &[Vec<F>], rhs: &[F]) -> Result<Vec<F>, ArithError> {
    let n = check_square(matrix, rhs)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut m: Vec<Vec<F>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut aug: Vec<F> = row.clone();
            aug.push(b.clone());
            match F::integral_scale(&aug) {
                Some(s) if !s.is_one() => aug.iter().map(|e| e.times(&s)).collect(),
                _ => aug,
            }
        })
        .collect();

    let mut prev = m[0][0].one_like();
    for k in 0..n {
        let pivot = (k..n)
            .filter(|&i| !m[i][k].is_zero())
            .min_by_key(|&i| m[i][k].weight())
            .ok_or(ArithError::SingularMatrix)?;
        m.swap(k, pivot);
        let inv_prev = prev.inverse().expect("previous pivot is nonzero");
        let (top, bottom) = m.split_at_mut(k + 1);
        let pr = &top[k];
        for row in bottom.iter_mut() {
            let f = row[k].clone();
            for j in k + 1..=n {
                let v = pr[k].times(&row[j]).minus(&f.times(&pr[j]));
                row[j] = v.times(&inv_prev);
            }
            row[k] = f.zero_like();
        }
        prev = m[k][k].clone();
    }

    let mut x = vec![m[0][0].zero_like(); n];
    for i in (0..n).rev() {
        let mut acc = m[i][n].clone();
        for j in i + 1..n {
            acc = acc.minus(&m[i][j].times(&x[j]));
        }
        x[i] = acc.over(&m[i][i]).ok_or(ArithError::SingularMatrix)?;
    }
    Ok(x)
}

pub fn mat_vec<F: Field>(matrix: &[Vec<F>], x: &[F]) -> Vec<F> {
    matrix
        .iter()
        .map(|row| {
            let mut acc = row[0].zero_like();
            for (a, b) in row.iter().zip(x) {
                acc.mul_add_assign(a, b);
            }
            acc
        })
        .collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref<F: Field>(m: &mut [Vec<F>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).filter(|&i| !m[i][c].is_zero()).min_by_key(|&i| m[i][c].weight()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inverse().expect("pivot is nonzero");
        for j in c..cols {
            m[r][j] = m[r][j].times(&inv);
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    if !m[r][j].is_zero() {
                        let v = m[i][j].minus(&f.times(&m[r][j]));
                        m[i][j] = v;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right kernel of a `rows x cols` matrix. `zero` fixes the
/// field when the matrix has no rows.
pub fn nullspace<F: Field>(matrix: &[Vec<F>], cols: usize, zero: &F) -> Vec<Vec<F>> {
    let mut m: Vec<Vec<F>> = matrix.to_vec();
    let pivots = rref(&mut m, cols);
    let one = zero.one_like();
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![zero.clone(); cols];
        v[free] = one.clone();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = m[row][free].negate();
        }
        basis.push(v);
    }
    basis
}

/// Some solution of `matrix * x = rhs` for a `rows x cols` system of any
/// shape, with free variables set to zero; `None` if inconsistent.
pub fn solve_consistent<F: Field>(matrix: &[Vec<F>], rhs: &[F], cols: usize, zero: &F) -> Option<Vec<F>> {
    let mut m: Vec<Vec<F>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut aug = row.clone();
            aug.push(b.clone());
            aug
        })
        .collect();
    let pivots = rref(&mut m, cols + 1);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![zero.clone(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = m[row][cols].clone();
    }
    Some(x)
}

pub fn rank<F: Field>(matrix: &[Vec<F>], cols: usize) -> usize {
    let mut m = matrix.to_vec();
    rref(&mut m, cols).len()
}
