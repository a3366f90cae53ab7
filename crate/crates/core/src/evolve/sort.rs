use num_traits::Float;

use crate::model::ObjectivePoint;
use crate::scalar::Scalar;

/// Fronts of indices into `points`, best first; indices ascending within a
/// front.
pub fn fast_nondominated_sort<T: Scalar>(points: &[ObjectivePoint<T>]) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut dominated_by_me: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut count = vec![0usize; n];
    for p in 0..n {
        for q in p + 1..n {
            if points[p].dominates(&points[q]) {
                dominated_by_me[p].push(q);
                count[q] += 1;
            } else if points[q].dominates(&points[p]) {
                dominated_by_me[q].push(p);
                count[p] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&p| count[p] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &p in &current {
            for &q in &dominated_by_me[p] {
                count[q] -= 1;
                if count[q] == 0 {
                    next.push(q);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::replace(&mut current, next));
    }
    fronts
}

/// Crowding distance within one front. Boundary points of each objective
/// are infinite; a zero-range objective adds nothing to interior points.
pub fn crowding_distance<T: Float + Scalar>(points: &[ObjectivePoint<T>]) -> Vec<T> {
    let n = points.len();
    let mut dist = vec![T::zero(); n];
    if n <= 2 {
        return vec![T::infinity(); n];
    }
    let axes: [fn(&ObjectivePoint<T>) -> T; 2] = [|p| p.f1, |p| p.f2];
    for value in axes {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| value(&points[a]).partial_cmp(&value(&points[b])).expect("finite").then(a.cmp(&b)));
        let lo = value(&points[order[0]]);
        let hi = value(&points[order[n - 1]]);
        dist[order[0]] = T::infinity();
        dist[order[n - 1]] = T::infinity();
        let range = hi - lo;
        if range <= T::zero() {
            continue;
        }
        for k in 1..n - 1 {
            let gap = value(&points[order[k + 1]]) - value(&points[order[k - 1]]);
            dist[order[k]] = dist[order[k]] + gap / range;
        }
    }
    dist
}
