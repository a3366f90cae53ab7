//! Hypervolume, Pareto filtering and front summaries.

use rand::Rng;

use crate::error::MetricsError;
use crate::model::ObjectivePoint;
use crate::scalar::Scalar;

/// Unique nondominated points, sorted by `f1` ascending (so `f2` strictly
/// descending).
pub fn pareto_filter<T: Scalar>(points: &[ObjectivePoint<T>]) -> Vec<ObjectivePoint<T>> {
    let mut sorted: Vec<&ObjectivePoint<T>> = points.iter().collect();
    sorted.sort_by(|a, b| {
        a.f1.partial_cmp(&b.f1).expect("comparable").then(a.f2.partial_cmp(&b.f2).expect("comparable"))
    });
    let mut out: Vec<ObjectivePoint<T>> = Vec::new();
    for p in sorted {
        if out.last().is_none_or(|last| p.f2 < last.f2) {
            out.push(p.clone());
        }
    }
    out
}

fn check_box<T: Scalar>(front: &[ObjectivePoint<T>]) -> Result<(), MetricsError> {
    for p in front {
        let (a, b) = (p.f1.to_f64().unwrap_or(f64::NAN), p.f2.to_f64().unwrap_or(f64::NAN));
        if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
            return Err(MetricsError::OutOfBox(a, b));
        }
    }
    Ok(())
}

/// Exact area dominated by `front` and bounded by `reference`, by slicing
/// along the second objective.
pub fn hypervolume_hso<T: Scalar>(front: &[ObjectivePoint<T>], reference: &ObjectivePoint<T>) -> Result<T, MetricsError> {
    check_box(front)?;
    let inside: Vec<ObjectivePoint<T>> =
        front.iter().filter(|p| p.f1 < reference.f1 && p.f2 < reference.f2).cloned().collect();
    let mut volume = T::zero();
    let mut ceiling = reference.f2.clone();
    for p in pareto_filter(&inside) {
        volume = volume + (reference.f1.clone() - p.f1.clone()) * (ceiling - p.f2.clone());
        ceiling = p.f2;
    }
    Ok(volume)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
}

/// Monte-Carlo estimate of the dominated area: the dominated fraction of
/// uniform samples in the reference box, times its area.
pub fn hypervolume_mc<R: Rng + ?Sized>(
    front: &[ObjectivePoint<f64>],
    reference: &ObjectivePoint<f64>,
    samples: usize,
    rng: &mut R,
) -> Result<McEstimate, MetricsError> {
    if samples == 0 {
        return Err(MetricsError::NoSamples);
    }
    check_box(front)?;
    let stairs = pareto_filter(front);
    let area = reference.f1 * reference.f2;
    let mut hits = 0usize;
    for _ in 0..samples {
        let u1 = rng.random::<f64>() * reference.f1;
        let u2 = rng.random::<f64>() * reference.f2;
        // the last stair at or left of u1 has the lowest f2 among them
        let k = stairs.partition_point(|p| p.f1 <= u1);
        if k > 0 && stairs[k - 1].f2 <= u2 {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    Ok(McEstimate { value: p * area, std_error: area * (p * (1.0 - p) / samples as f64).sqrt() })
}

/// Mean `f1` and mean `f2` over a front.
pub fn front_stats<T: Scalar>(front: &[ObjectivePoint<T>]) -> Result<(T, T), MetricsError> {
    if front.is_empty() {
        return Err(MetricsError::EmptyFront);
    }
    let n = T::from_usize(front.len()).expect("representable");
    let (s1, s2) = front
        .iter()
        .fold((T::zero(), T::zero()), |(a, b), p| (a + p.f1.clone(), b + p.f2.clone()));
    Ok((s1 / n.clone(), s2 / n))
}
