//! Exact integer lattices: Hermite normal form, kernels of integer row
//! vectors and membership.

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// Output rows are in echelon form with positive pivots, entries above each
/// pivot reduced into `[0, pivot)`, and zero rows dropped.
pub fn hermite_normal_form(rows: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let Some(ncols) = rows.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut m: Vec<Vec<i128>> = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == m.len() {
            break;
        }
        loop {
            let pivot = (rank..m.len()).filter(|&i| m[i][col] != 0).min_by_key(|&i| m[i][col].abs());
            let Some(p) = pivot else { break };
            m.swap(rank, p);
            let mut done = true;
            for i in rank + 1..m.len() {
                if m[i][col] != 0 {
                    let q = m[i][col].div_euclid(m[rank][col]);
                    for j in 0..ncols {
                        m[i][j] -= q * m[rank][j];
                    }
                    if m[i][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if rank < m.len() && m[rank][col] != 0 {
            if m[rank][col] < 0 {
                m[rank].iter_mut().for_each(|x| *x = -*x);
            }
            for i in 0..rank {
                let q = m[i][col].div_euclid(m[rank][col]);
                if q != 0 {
                    for j in 0..ncols {
                        m[i][j] -= q * m[rank][j];
                    }
                }
            }
            rank += 1;
        }
    }
    m.truncate(rank);
    m
}

/// Exact membership of `v` in the lattice with Hermite basis `hnf`.
pub fn in_lattice(hnf: &[Vec<i128>], v: &[i128]) -> bool {
    let mut v = v.to_vec();
    for row in hnf {
        let col = row.iter().position(|&x| x != 0).expect("HNF rows are nonzero");
        if v[col] % row[col] != 0 {
            return false;
        }
        let q = v[col] / row[col];
        for (x, r) in v.iter_mut().zip(row) {
            *x -= q * r;
        }
    }
    v.iter().all(|&x| x == 0)
}

/// Basis (in Hermite form) of `{v ∈ Z^m : Σ a_k v_k = 0}`.
pub fn kernel_basis(a: &[i128]) -> Vec<Vec<i128>> {
    let m = a.len();
    // Columns of `u` track unimodular column operations applied to `a`.
    let mut cols: Vec<Vec<i128>> = (0..m).map(|i| (0..m).map(|j| i128::from(i == j)).collect()).collect();
    let mut v = a.to_vec();
    for j in 1..m {
        if v[j] == 0 {
            continue;
        }
        if v[0] == 0 {
            v.swap(0, j);
            cols.swap(0, j);
            continue;
        }
        let (g, x, y) = extended_gcd(v[0], v[j]);
        let (a0, aj) = (v[0] / g, v[j] / g);
        let c0: Vec<i128> = cols[0].iter().zip(&cols[j]).map(|(p, q)| x * p + y * q).collect();
        let cj: Vec<i128> = cols[0].iter().zip(&cols[j]).map(|(p, q)| aj * p - a0 * q).collect();
        cols[0] = c0;
        cols[j] = cj;
        v[0] = g;
        v[j] = 0;
    }
    let kernel: Vec<Vec<i128>> = if v[0] == 0 { cols } else { cols[1..].to_vec() };
    hermite_normal_form(&kernel)
}

/// Basis (in Hermite form) of the integer kernel of a matrix with `cols`
/// columns given by its rows.
pub fn matrix_kernel(rows: &[Vec<i128>], cols: usize) -> Vec<Vec<i128>> {
    let mut basis: Vec<Vec<i128>> = (0..cols).map(|i| (0..cols).map(|j| i128::from(i == j)).collect()).collect();
    for row in rows {
        if basis.is_empty() {
            break;
        }
        let values: Vec<i128> = basis.iter().map(|b| b.iter().zip(row).map(|(x, y)| x * y).sum()).collect();
        if values.iter().all(|&v| v == 0) {
            continue;
        }
        let combos = kernel_basis(&values);
        basis = combos
            .iter()
            .map(|c| (0..cols).map(|j| c.iter().zip(&basis).map(|(k, b)| k * b[j]).sum()).collect())
            .collect();
        basis = hermite_normal_form(&basis);
    }
    basis
}

fn extended_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// All integer vectors of dimension `m` with ℓ1-norm exactly `norm`, in a
/// fixed deterministic order.
pub fn l1_sphere(m: usize, norm: u32) -> Vec<Vec<i128>> {
    fn rec(m: usize, left: u32, cur: &mut Vec<i128>, out: &mut Vec<Vec<i128>>) {
        if cur.len() == m {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if cur.len() + 1 == m {
            for x in if left == 0 { vec![0] } else { vec![-(left as i128), left as i128] } {
                cur.push(x);
                rec(m, 0, cur, out);
                cur.pop();
            }
            return;
        }
        for a in 0..=left {
            let signs: &[i128] = if a == 0 { &[1] } else { &[-1, 1] };
            for &s in signs {
                cur.push(s * a as i128);
                rec(m, left - a, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if m > 0 {
        rec(m, norm, &mut Vec::with_capacity(m), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_of_simple_lattice() {
        let h = hermite_normal_form(&[vec![2, 4], vec![3, 5]]);
        assert_eq!(h, vec![vec![1, 1], vec![0, 2]]);
        assert!(in_lattice(&h, &[5, 9]));
        assert!(!in_lattice(&h, &[1, 0]));
    }

    #[test]
    fn factorial_kernel_rank() {
        let k = kernel_basis(&[1, 2, 6]);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(v[0] + 2 * v[1] + 6 * v[2], 0);
        }
        assert!(in_lattice(&k, &[2, -1, 0]));
        assert!(in_lattice(&k, &[0, 3, -1]));
        assert!(!in_lattice(&k, &[1, 0, 0]));
    }

    #[test]
    fn kernel_with_zero_entries() {
        let k = kernel_basis(&[0, 3, 0]);
        assert_eq!(k, vec![vec![1, 0, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn kernel_of_matrix() {
        // x + y - z = 0, y + w = 0.
        let k = matrix_kernel(&[vec![1, 1, -1, 0], vec![0, 1, 0, 1]], 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(v[0] + v[1] - v[2], 0);
            assert_eq!(v[1] + v[3], 0);
        }
        assert!(matrix_kernel(&[vec![1, 0], vec![0, 1]], 2).is_empty());
    }

    #[test]
    fn sphere_counts() {
        assert_eq!(l1_sphere(2, 1).len(), 4);
        assert_eq!(l1_sphere(2, 2).len(), 8);
        assert_eq!(l1_sphere(3, 0), vec![vec![0, 0, 0]]);
        assert!(l1_sphere(3, 3).iter().all(|v| v.iter().map(|x| x.abs()).sum::<i128>() == 3));
    }
}
