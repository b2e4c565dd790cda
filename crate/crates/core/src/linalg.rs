//! Tiny dense helpers for vectors in R^m with m small.

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

pub fn neg(a: &[f64]) -> Vec<f64> {
    a.iter().map(|x| -x).collect()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Determinant by partial-pivot elimination.
pub fn det(mut rows: Vec<Vec<f64>>) -> f64 {
    let n = rows.len();
    let mut d = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| rows[i][c].abs().total_cmp(&rows[j][c].abs())).unwrap();
        if rows[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            rows.swap(p, c);
            d = -d;
        }
        d *= rows[c][c];
        for i in c + 1..n {
            let f = rows[i][c] / rows[c][c];
            for j in c..n {
                rows[i][j] -= f * rows[c][j];
            }
        }
    }
    d
}

/// Numerical rank with a relative tolerance.
pub fn rank(vectors: &[Vec<f64>], tol: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let mut rows: Vec<Vec<f64>> = vectors.to_vec();
    let cols = rows[0].len();
    let scale = rows.iter().map(|r| norm_inf(r)).fold(0.0, f64::max).max(1e-300);
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let p = (r..rows.len()).max_by(|&i, &j| rows[i][c].abs().total_cmp(&rows[j][c].abs())).unwrap();
        if rows[p][c].abs() <= tol * scale {
            continue;
        }
        rows.swap(p, r);
        for i in r + 1..rows.len() {
            let f = rows[i][c] / rows[r][c];
            for j in c..cols {
                rows[i][j] -= f * rows[r][j];
            }
        }
        r += 1;
    }
    r
}

/// Vector orthogonal to the given m-1 vectors in R^m (generalized cross
/// product). Zero when they are linearly dependent.
pub fn cross(vectors: &[Vec<f64>], m: usize) -> Vec<f64> {
    debug_assert_eq!(vectors.len() + 1, m);
    (0..m)
        .map(|i| {
            let minor: Vec<Vec<f64>> = vectors
                .iter()
                .map(|v| v.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| *x).collect())
                .collect();
            let s = if i % 2 == 0 { 1.0 } else { -1.0 };
            s * if minor.is_empty() { 1.0 } else { det(minor) }
        })
        .collect()
}

/// All k-subsets of 0..n in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Lexicographic comparison of float vectors.
pub fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_is_orthogonal() {
        let v = vec![vec![1.0, 2.0, 3.0], vec![-1.0, 0.5, 2.0]];
        let c = cross(&v, 3);
        assert!(dot(&c, &v[0]).abs() < 1e-12);
        assert!(dot(&c, &v[1]).abs() < 1e-12);
        assert!(norm2(&c) > 0.1);
    }

    #[test]
    fn cross_in_plane_rotates() {
        assert_eq!(cross(&[vec![1.0, 0.0]], 2), vec![0.0, -1.0]);
    }

    #[test]
    fn rank_detects_dependence() {
        assert_eq!(rank(&[vec![1.0, 2.0], vec![2.0, 4.0]], 1e-12), 1);
        assert_eq!(rank(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]], 1e-12), 2);
    }

    #[test]
    fn subsets_count() {
        assert_eq!(subsets(5, 2).len(), 10);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
    }
}
