//! Test-only oracles, independent of the library's factorization paths.

#![allow(dead_code)]

/// Laplace expansion along the first row. Exponential; fine for n <= 6.
pub fn cofactor_det(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    match n {
        0 => 1.0,
        1 => m[0][0],
        _ => (0..n)
            .map(|c| {
                let minor: Vec<Vec<f64>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(k, _)| *k != c)
                            .map(|(_, v)| *v)
                            .collect()
                    })
                    .collect();
                let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
                sign * m[0][c] * cofactor_det(&minor)
            })
            .sum(),
    }
}

/// Bell numbers by B(n+1) = Σ_k C(n,k) B(k).
pub fn bell(n: usize) -> u64 {
    let mut b = vec![1u64];
    for m in 0..n {
        let mut next = 0u64;
        let mut binom = 1u64;
        for (k, &bk) in b.iter().enumerate() {
            next += binom * bk;
            binom = binom * (m - k) as u64 / (k + 1) as u64;
        }
        b.push(next);
    }
    b[n]
}

/// Counts receiver vectors by testing every tuple in candidates^M.
pub fn brute_assignment_count(partition: &[Vec<usize>], candidates: &[usize]) -> usize {
    let m = partition.len();
    let c = candidates.len();
    let total = c.pow(m as u32);
    (0..total)
        .filter(|&code| {
            let mut rest = code;
            partition.iter().all(|block| {
                let r = candidates[rest % c];
                rest /= c;
                !block.contains(&r)
            })
        })
        .count()
}

/// `A Aᵀ + shift·I` from a flat list of entries.
pub fn spd_from(entries: &[f64], n: usize, shift: f64) -> Vec<Vec<f64>> {
    (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let dot: f64 = (0..n)
                        .map(|k| entries[r * n + k] * entries[c * n + k])
                        .sum();
                    if r == c {
                        dot + shift
                    } else {
                        dot
                    }
                })
                .collect()
        })
        .collect()
}
