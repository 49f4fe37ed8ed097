//! Integer partitions with a fixed number of parts, listed as weakly
//! decreasing vectors in descending lexicographic order.

/// All partitions of `n` into exactly `parts` parts, each at least `min_part`.
///
/// `partitions_exact(6, 2, 1)` yields `[5, 1], [4, 2], [3, 3]`.
pub fn partitions_exact(n: u32, parts: u32, min_part: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(parts as usize);
    fill(n, parts, n, min_part, &mut cur, &mut out);
    out
}

fn fill(rest: u32, parts: u32, max: u32, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if parts == 0 {
        if rest == 0 {
            out.push(cur.clone());
        }
        return;
    }
    // need rest >= parts * min and rest <= parts * max
    if u64::from(rest) < u64::from(parts) * u64::from(min) {
        return;
    }
    let hi = max.min(rest - (parts - 1) * min);
    // the largest remaining part must be at least ceil(rest / parts)
    let lo = min.max(rest.div_ceil(parts));
    for p in (lo..=hi).rev() {
        cur.push(p);
        fill(rest - p, parts - 1, p, min, cur, out);
        cur.pop();
    }
}

pub fn count_exact(n: u32, parts: u32, min_part: u32) -> usize {
    partitions_exact(n, parts, min_part).len()
}
