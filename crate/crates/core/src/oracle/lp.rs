//! Brute-force linear programming by vertex enumeration, for tiny problems.

/// `min cᵀx` subject to `A x ≤ b`; the feasible set must be bounded.
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub c: Vec<f64>,
    pub le: Vec<(Vec<f64>, f64)>,
}

fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[p][col].abs() < 1e-11 {
            return None;
        }
        a.swap(col, p);
        b.swap(col, p);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..n {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

/// Optimal value and a minimising vertex; `None` if no feasible vertex exists.
pub fn lp_vertex_enumeration(lp: &LpProblem) -> Option<(f64, Vec<f64>)> {
    let n = lp.c.len();
    let m = lp.le.len();
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut pick: Vec<usize> = (0..n).collect();
    if n > m {
        return None;
    }
    loop {
        let a: Vec<Vec<f64>> = pick.iter().map(|&r| lp.le[r].0.clone()).collect();
        let b: Vec<f64> = pick.iter().map(|&r| lp.le[r].1).collect();
        if let Some(x) = solve_square(a, b) {
            let feasible = lp
                .le
                .iter()
                .all(|(a, b)| a.iter().zip(&x).map(|(p, q)| p * q).sum::<f64>() <= b + 1e-9);
            if feasible {
                let v: f64 = lp.c.iter().zip(&x).map(|(p, q)| p * q).sum();
                if best.as_ref().is_none_or(|(bv, _)| v < *bv) {
                    best = Some((v, x));
                }
            }
        }
        // Next combination of n rows out of m.
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if pick[i] != i + m - n {
                break;
            }
        }
        pick[i] += 1;
        for j in (i + 1)..n {
            pick[j] = pick[j - 1] + 1;
        }
    }
}
