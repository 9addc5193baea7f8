//! Independent reference implementations used as test oracles. Nothing here
//! calls into the library's arithmetic: entries are plain expanded vectors.

#![allow(dead_code)]

/// `w(q,b) = b - Σ ⌊q_i b / N⌋` on the expanded vector.
pub fn weight(q: &[u128], b: u128) -> u128 {
    let n: u128 = 1 + q.iter().sum::<u128>();
    b - q.iter().map(|&qi| qi * b / n).sum::<u128>()
}

/// h* by counting `b` per weight, with trailing zeros trimmed.
pub fn h_star(q: &[u128]) -> Vec<u128> {
    let n: u128 = 1 + q.iter().sum::<u128>();
    let mut out = vec![0u128; q.len() + 1];
    for b in 0..n {
        out[weight(q, b) as usize] += 1;
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

pub fn poly_mul(a: &[u128], b: &[u128]) -> Vec<u128> {
    let mut out = vec![0u128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Non-decreasing then non-increasing.
pub fn unimodal(c: &[u128]) -> bool {
    let mut i = 0;
    while i + 1 < c.len() && c[i] <= c[i + 1] {
        i += 1;
    }
    while i + 1 < c.len() && c[i] >= c[i + 1] {
        i += 1;
    }
    i + 1 >= c.len()
}

pub fn reflexive(q: &[u128]) -> bool {
    let n: u128 = 1 + q.iter().sum::<u128>();
    q.iter().all(|&qi| n % qi == 0)
}

/// Expands `(r, x)` to a sorted vector.
pub fn expand(r: &[u128], x: &[u128]) -> Vec<u128> {
    r.iter()
        .zip(x)
        .flat_map(|(&ri, &xi)| std::iter::repeat_n(ri, xi as usize))
        .collect()
}

/// Every partition of `n` into parts in `min..=max`, ascending vectors.
/// Built by extending partitions of smaller totals; order is irrelevant.
pub fn partitions(n: u128, min: u128) -> Vec<Vec<u128>> {
    fn go(rest: u128, min: u128, cur: &mut Vec<u128>, out: &mut Vec<Vec<u128>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in min..=rest {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, min, &mut Vec::new(), &mut out);
    out
}

/// `p(0..=n)` by Euler's pentagonal number recurrence.
pub fn partition_numbers(n: usize) -> Vec<u128> {
    let mut p = vec![0i128; n + 1];
    p[0] = 1;
    for m in 1..=n {
        let mut total = 0i128;
        for k in 1.. {
            let k = k as i128;
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > m {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            total += sign * p[m - g1];
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= m {
                total += sign * p[m - g2];
            }
        }
        p[m] = total;
    }
    p.into_iter().map(|v| v as u128).collect()
}

/// IDP straight from the per-index conditions, over every index `j`.
pub fn idp_per_index(q: &[u128]) -> bool {
    let n = q.len();
    for j in 0..n {
        let qj = q[j];
        let others: u128 = (0..n).filter(|&i| i != j).map(|i| q[i]).sum();
        assert_eq!((1 + others) % qj, 0, "not reflexive");
        let h = |b: u128| -> u128 {
            b * ((1 + others) / qj) - (0..n).filter(|&i| i != j).map(|i| b * q[i] / qj).sum::<u128>()
        };
        for b in 1..qj {
            if h(b) < 2 {
                continue;
            }
            let ok = (1..b).any(|c| {
                h(c) == 1
                    && (0..n)
                        .filter(|&i| i != j)
                        .all(|i| b * q[i] / qj - c * q[i] / qj == (b - c) * q[i] / qj)
            });
            if !ok {
                return false;
            }
        }
    }
    true
}
