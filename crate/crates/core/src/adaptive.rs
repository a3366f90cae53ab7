//! Operator credit assignment, weight update and roulette selection.

use rand::Rng;

use crate::model::ObjectivePoint;
use crate::scalar::Scalar;

/// How a new solution relates to the archive it is scored against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    DominatesAll,
    DominatesOne,
    /// Nondominated by, and not dominating, any member. Objective duplicates
    /// of a member land here.
    OnFrontier,
    Dominated,
}

impl Outcome {
    pub fn classify<T: Scalar>(point: &ObjectivePoint<T>, archive: &[ObjectivePoint<T>]) -> Outcome {
        if archive.iter().any(|a| a.dominates(point)) {
            return Outcome::Dominated;
        }
        let beaten = archive.iter().filter(|a| point.dominates(a)).count();
        if beaten == archive.len() {
            Outcome::DominatesAll
        } else if beaten > 0 {
            Outcome::DominatesOne
        } else {
            Outcome::OnFrontier
        }
    }
}

/// Score table; a dominated solution earns `dominated` with probability
/// `dominated_chance`, else nothing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScoreTable {
    pub dominates_all: f64,
    pub dominates_one: f64,
    pub on_frontier: f64,
    pub dominated: f64,
    pub dominated_chance: f64,
}

impl Default for ScoreTable {
    fn default() -> Self {
        ScoreTable { dominates_all: 30.0, dominates_one: 20.0, on_frontier: 10.0, dominated: 1.0, dominated_chance: 0.1 }
    }
}

impl ScoreTable {
    pub fn score<R: Rng + ?Sized>(&self, outcome: Outcome, rng: &mut R) -> f64 {
        match outcome {
            Outcome::DominatesAll => self.dominates_all,
            Outcome::DominatesOne => self.dominates_one,
            Outcome::OnFrontier => self.on_frontier,
            Outcome::Dominated => {
                if rng.random::<f64>() < self.dominated_chance {
                    self.dominated
                } else {
                    0.0
                }
            }
        }
    }
}

/// Weights and accumulated scores of one operator family.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorStats<T> {
    weights: Vec<T>,
    scores: Vec<T>,
    lambda: T,
}

impl<T: Scalar> OperatorStats<T> {
    /// Equal weights `1/n`.
    pub fn uniform(n: usize, lambda: T) -> Self {
        assert!(n > 0, "an operator family needs at least one member");
        let w = T::one() / T::from_usize(n).expect("representable");
        OperatorStats { weights: vec![w; n], scores: vec![T::zero(); n], lambda }
    }

    pub fn from_weights(weights: Vec<T>, lambda: T) -> Self {
        let scores = vec![T::zero(); weights.len()];
        OperatorStats { weights, scores, lambda }
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn scores(&self) -> &[T] {
        &self.scores
    }

    pub fn lambda(&self) -> &T {
        &self.lambda
    }

    pub fn add_score(&mut self, op: usize, score: T) {
        self.scores[op] = self.scores[op].clone() + score;
    }

    /// `ω ← (1−λ)ω + λπ/Σπ`, skipped when no score was earned; scores then
    /// restart from zero.
    pub fn update(&mut self) {
        let total = self.scores.iter().cloned().fold(T::zero(), |a, b| a + b);
        if total > T::zero() {
            let keep = T::one() - self.lambda.clone();
            for (w, s) in self.weights.iter_mut().zip(&self.scores) {
                *w = keep.clone() * w.clone() + self.lambda.clone() * s.clone() / total.clone();
            }
        }
        for s in &mut self.scores {
            *s = T::zero();
        }
    }

    /// Roulette wheel over the weights; `None` when they sum to zero.
    pub fn select<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<usize> {
        let weights: Vec<f64> = self.weights.iter().map(|w| w.to_f64().unwrap_or(0.0).max(0.0)).collect();
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return None;
        }
        let r = rng.random::<f64>() * total;
        let mut acc = 0.0;
        let mut last = None;
        for (k, &w) in weights.iter().enumerate() {
            if w <= 0.0 {
                continue;
            }
            acc += w;
            last = Some(k);
            if r < acc {
                return last;
            }
        }
        last
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn score_examples() {
        let t = ScoreTable::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(t.score(Outcome::DominatesAll, &mut rng), 30.0);
        assert_eq!(t.score(Outcome::DominatesOne, &mut rng), 20.0);
        assert_eq!(t.score(Outcome::OnFrontier, &mut rng), 10.0);
        let n = 100_000;
        let mean: f64 = (0..n).map(|_| t.score(Outcome::Dominated, &mut rng)).sum::<f64>() / n as f64;
        assert!((mean - 0.1).abs() < 0.005, "{mean}");
    }

    #[test]
    fn classify_against_archive() {
        let p = |a, b| ObjectivePoint::new(a, b);
        let archive = [p(0.2, 0.6), p(0.6, 0.2)];
        assert_eq!(Outcome::classify(&p(0.1, 0.1), &archive), Outcome::DominatesAll);
        assert_eq!(Outcome::classify(&p(0.1, 0.5), &archive), Outcome::DominatesOne);
        assert_eq!(Outcome::classify(&p(0.4, 0.4), &archive), Outcome::OnFrontier);
        assert_eq!(Outcome::classify(&p(0.2, 0.6), &archive), Outcome::OnFrontier);
        assert_eq!(Outcome::classify(&p(0.7, 0.7), &archive), Outcome::Dominated);
        assert_eq!(Outcome::classify(&p(0.7, 0.7), &[]), Outcome::DominatesAll);
    }

    #[test]
    fn update_examples() {
        let mut s = OperatorStats::from_weights(vec![0.3, 0.7], 0.0);
        s.add_score(0, 30.0);
        s.update();
        assert_eq!(s.weights(), &[0.3, 0.7]);

        let mut s = OperatorStats::uniform(2, 1.0);
        s.add_score(0, 30.0);
        s.add_score(1, 10.0);
        s.update();
        assert_eq!(s.weights(), &[0.75, 0.25]);
        assert_eq!(s.scores(), &[0.0, 0.0]);

        let mut s = OperatorStats::uniform(2, 0.5);
        s.add_score(0, 30.0);
        s.add_score(1, 10.0);
        s.update();
        assert_eq!(s.weights(), &[0.625, 0.375]);

        // no evidence, no update
        s.update();
        assert_eq!(s.weights(), &[0.625, 0.375]);
    }

    #[test]
    fn update_is_exact_over_rationals() {
        let r = |a, b| Ratio::new(a, b);
        let mut s = OperatorStats::uniform(3, r(1i64, 3));
        s.add_score(0, r(30, 1));
        s.add_score(2, r(10, 1));
        s.update();
        assert_eq!(s.weights(), &[r(17, 36), r(2, 9), r(11, 36)]);
        let sum = s.weights().iter().fold(r(0, 1), |a, &b| a + b);
        assert_eq!(sum, r(1, 1));
    }

    #[test]
    fn roulette_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = OperatorStats::from_weights(vec![1.0, 0.0, 0.0, 0.0], 0.5);
        assert!((0..1000).all(|_| s.select(&mut rng) == Some(0)));
        let zero = OperatorStats::from_weights(vec![0.0, 0.0], 0.5);
        assert_eq!(zero.select(&mut rng), None);
        let s = OperatorStats::from_weights(vec![3.0, 1.0], 0.5);
        let n = 100_000;
        let hits = (0..n).filter(|_| s.select(&mut rng) == Some(0)).count();
        assert!((hits as f64 / n as f64 - 0.75).abs() < 0.02);
    }
}
