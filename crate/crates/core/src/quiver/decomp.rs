use std::cmp::Ordering;

use super::DimVector;

/// Graded-lex order: by `|d|`, then lexicographically.
pub fn graded_cmp(a: &DimVector, b: &DimVector) -> Ordering {
    a.norm().cmp(&b.norm()).then_with(|| a.0.cmp(&b.0))
}

/// All `e` with `0 <= e <= d`, in graded-lex order.
pub fn sub_vectors(d: &DimVector) -> Vec<DimVector> {
    let mut out = vec![DimVector::zeros(d.len())];
    for (i, &bound) in d.0.iter().enumerate() {
        let mut next = Vec::with_capacity(out.len() * (bound.max(0) as usize + 1));
        for e in &out {
            for k in 0..=bound.max(0) {
                let mut f = e.clone();
                f.0[i] = k;
                next.push(f);
            }
        }
        out = next;
    }
    out.sort_by(graded_cmp);
    out
}

/// Ordered tuples `(d_1, ..., d_n)` of nonzero nonnegative vectors summing to
/// `d`, each part accepted by `restrict`. Tuples come in lexicographic order
/// with parts compared by [`graded_cmp`].
pub fn decompositions(
    d: &DimVector,
    n: usize,
    restrict: Option<&dyn Fn(&DimVector) -> bool>,
) -> Vec<Vec<DimVector>> {
    let mut out = Vec::new();
    if n == 0 || !d.is_nonneg() {
        return out;
    }
    let parts: Vec<DimVector> = sub_vectors(d)
        .into_iter()
        .filter(|e| !e.is_zero() && restrict.is_none_or(|f| f(e)))
        .collect();
    let mut stack = Vec::with_capacity(n);
    recurse(d, n, &parts, &mut stack, &mut out);
    out
}

fn recurse(
    rest: &DimVector,
    n: usize,
    parts: &[DimVector],
    stack: &mut Vec<DimVector>,
    out: &mut Vec<Vec<DimVector>>,
) {
    if n == 0 {
        if rest.is_zero() {
            out.push(stack.clone());
        }
        return;
    }
    if rest.norm() < n as i64 {
        return;
    }
    for p in parts {
        if !p.le(rest) {
            continue;
        }
        let r = rest - p;
        if n == 1 && !r.is_zero() {
            continue;
        }
        stack.push(p.clone());
        recurse(&r, n - 1, parts, stack, out);
        stack.pop();
    }
}

/// Decompositions into any number of parts, shortest first.
pub fn all_decompositions(
    d: &DimVector,
    restrict: Option<&dyn Fn(&DimVector) -> bool>,
) -> Vec<Vec<DimVector>> {
    (1..=d.norm().max(0) as usize)
        .flat_map(|n| decompositions(d, n, restrict))
        .collect()
}
