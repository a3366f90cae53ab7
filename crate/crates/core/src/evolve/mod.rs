//! The evolutionary loop: a nondominated-sorting population whose offspring
//! are bred by adaptive destroy/repair, plus the random-elitism baseline.

mod archive;
mod sort;

pub use archive::{Archive, Truncation};
pub use sort::{crowding_distance, fast_nondominated_sort};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::adaptive::{OperatorStats, Outcome, ScoreTable};
use crate::construct::{random_order, rhga_state, RulePolicy, WindowState};
use crate::encoding::{encode, Chromosome};
use crate::error::EncodingError;
use crate::metrics::{hypervolume_hso, pareto_filter};
use crate::model::{Instance, ObjectivePoint, Schedule, SolveMode};
use crate::neighborhood::{destroy, repair, DestroyOp, Guidance, RepairOp, TabooPolicy};

#[derive(Clone, Debug, PartialEq)]
pub struct RunParams {
    /// Population size.
    pub ns: usize,
    /// Archive capacity.
    pub na: usize,
    pub max_iter: usize,
    /// Reaction factor of the weight update.
    pub lambda: f64,
    pub scores: ScoreTable,
    pub taboo: TabooPolicy,
    pub rule: RulePolicy,
    pub seed: u64,
}

impl Default for RunParams {
    fn default() -> Self {
        RunParams {
            ns: 100,
            na: 100,
            max_iter: 200,
            lambda: 0.5,
            scores: ScoreTable::default(),
            taboo: TabooPolicy::default(),
            rule: RulePolicy::Mixed,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Individual {
    pub state: WindowState,
    pub objectives: ObjectivePoint<f64>,
    pub rank: usize,
    pub crowding: f64,
}

impl Individual {
    fn new(instance: &Instance, state: WindowState) -> Self {
        let objectives = state.objectives(instance);
        Individual { state, objectives, rank: 0, crowding: 0.0 }
    }

    pub fn schedule(&self, instance: &Instance) -> Schedule {
        self.state.to_schedule(instance)
    }

    pub fn chromosome(&self, instance: &Instance, mode: SolveMode) -> Result<Chromosome, EncodingError> {
        encode(&self.schedule(instance), instance, mode)
    }
}

/// One row per iteration; row 0 describes the initial population.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub iteration: usize,
    /// Hypervolume of every nondominated point found so far.
    pub hv: f64,
    pub archive_size: usize,
    pub destroy_weights: [f64; 8],
    pub repair_weights: [f64; 4],
    pub destroy_uses: [u32; 8],
    pub repair_uses: [u32; 4],
}

#[derive(Clone, Debug)]
pub struct RunResult {
    /// Archive members, sorted by objectives.
    pub front: Vec<Individual>,
    pub trace: Vec<TraceRow>,
}

impl RunResult {
    pub fn points(&self) -> Vec<ObjectivePoint<f64>> {
        self.front.iter().map(|i| i.objectives).collect()
    }

    /// Hypervolume of the archive against (1, 1).
    pub fn final_hv(&self) -> f64 {
        hypervolume_hso(&self.points(), &ObjectivePoint::new(1.0, 1.0)).expect("objectives lie in the unit box")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Elitism {
    Crowded,
    Random,
}

pub fn run(instance: &Instance, mode: SolveMode, params: &RunParams) -> RunResult {
    evolve(instance, mode, params, Elitism::Crowded)
}

/// Same loop with uniformly random survivor selection and archive truncation.
pub fn run_crem(instance: &Instance, mode: SolveMode, params: &RunParams) -> RunResult {
    evolve(instance, mode, params, Elitism::Random)
}

/// Sets rank and crowding distance of every individual.
fn assign_fitness(pop: &mut [Individual]) -> Vec<Vec<usize>> {
    let points: Vec<_> = pop.iter().map(|i| i.objectives).collect();
    let fronts = fast_nondominated_sort(&points);
    for (rank, front) in fronts.iter().enumerate() {
        let pts: Vec<_> = front.iter().map(|&k| points[k]).collect();
        for (&k, d) in front.iter().zip(crowding_distance(&pts)) {
            pop[k].rank = rank;
            pop[k].crowding = d;
        }
    }
    fronts
}

fn better(a: &Individual, b: &Individual) -> bool {
    a.rank < b.rank || (a.rank == b.rank && a.crowding > b.crowding)
}

/// Binary tournament under the crowded comparison.
fn tournament<'a, R: Rng + ?Sized>(pop: &'a [Individual], rng: &mut R) -> &'a Individual {
    if pop.len() == 1 {
        return &pop[0];
    }
    let pick = sample(rng, pop.len(), 2);
    let (a, b) = (&pop[pick.index(0)], &pop[pick.index(1)]);
    if better(b, a) {
        b
    } else {
        a
    }
}

/// Keeps `n` of `pool`: whole fronts first, then the least crowded members of
/// the split front.
fn crowded_survivors(mut pool: Vec<Individual>, n: usize) -> Vec<Individual> {
    let fronts = assign_fitness(&mut pool);
    let mut keep: Vec<usize> = Vec::with_capacity(n);
    for front in fronts {
        if keep.len() + front.len() <= n {
            keep.extend(front);
            continue;
        }
        let mut rest = front;
        rest.sort_by(|&a, &b| pool[b].crowding.total_cmp(&pool[a].crowding).then(a.cmp(&b)));
        keep.extend(rest.into_iter().take(n - keep.len()));
        break;
    }
    keep.sort_unstable();
    let mut slots: Vec<Option<Individual>> = pool.into_iter().map(Some).collect();
    keep.into_iter().map(|k| slots[k].take().expect("kept once")).collect()
}

fn random_survivors<R: Rng + ?Sized>(pool: Vec<Individual>, n: usize, rng: &mut R) -> Vec<Individual> {
    if pool.len() <= n {
        return pool;
    }
    let mut keep = sample(rng, pool.len(), n).into_vec();
    keep.sort_unstable();
    let mut slots: Vec<Option<Individual>> = pool.into_iter().map(Some).collect();
    keep.into_iter().map(|k| slots[k].take().expect("kept once")).collect()
}

#[cfg(debug_assertions)]
fn check_feasible(instance: &Instance, mode: SolveMode, state: &WindowState) {
    let v = crate::model::validate_schedule(instance, &state.to_schedule(instance), mode).expect("ids resolve");
    assert!(v.is_empty(), "operator produced an infeasible schedule: {v:?}");
}

/// Every nondominated point seen so far; only used for the trace.
fn record(elite: &mut Vec<ObjectivePoint<f64>>, p: ObjectivePoint<f64>) {
    if elite.iter().any(|e| e.covers(&p)) {
        return;
    }
    elite.retain(|e| !p.dominates(e));
    elite.push(p);
}

fn evolve(instance: &Instance, mode: SolveMode, params: &RunParams, elitism: Elitism) -> RunResult {
    assert!(params.ns >= 1 && params.na >= 1, "population and archive sizes must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let guidance = Guidance::new(instance);
    let reference = ObjectivePoint::new(1.0, 1.0);
    let truncation = match elitism {
        Elitism::Crowded => Truncation::Crowding,
        Elitism::Random => Truncation::Random,
    };
    let mut archive: Archive<WindowState> = Archive::new(params.na, truncation);
    let mut elite: Vec<ObjectivePoint<f64>> = Vec::new();

    let mut pop: Vec<Individual> = (0..params.ns)
        .map(|_| {
            let order = random_order(instance, &mut rng);
            Individual::new(instance, rhga_state(instance, mode, &order, params.rule, &mut rng))
        })
        .collect();
    for ind in &pop {
        #[cfg(debug_assertions)]
        check_feasible(instance, mode, &ind.state);
        archive.offer(ind.objectives, ind.state.clone(), &mut rng);
        record(&mut elite, ind.objectives);
    }
    assign_fitness(&mut pop);

    let mut destroy_stats = OperatorStats::uniform(DestroyOp::ALL.len(), params.lambda);
    let mut repair_stats = OperatorStats::uniform(RepairOp::ALL.len(), params.lambda);
    let hv = |elite: &[ObjectivePoint<f64>]| hypervolume_hso(elite, &reference).expect("unit box");
    let row = |iteration, hv, archive_size, d: &OperatorStats<f64>, r: &OperatorStats<f64>, du, ru| TraceRow {
        iteration,
        hv,
        archive_size,
        destroy_weights: d.weights().try_into().expect("eight destroy operators"),
        repair_weights: r.weights().try_into().expect("four repair operators"),
        destroy_uses: du,
        repair_uses: ru,
    };
    let mut trace = vec![row(0, hv(&elite), archive.len(), &destroy_stats, &repair_stats, [0; 8], [0; 4])];

    for iteration in 1..=params.max_iter {
        let mut offspring = Vec::with_capacity(params.ns);
        let mut destroy_uses = [0u32; 8];
        let mut repair_uses = [0u32; 4];
        for _ in 0..params.ns {
            let parent = tournament(&pop, &mut rng);
            let d = destroy_stats.select(&mut rng).expect("weights stay positive");
            let r = repair_stats.select(&mut rng).expect("weights stay positive");
            destroy_uses[d] += 1;
            repair_uses[r] += 1;
            let mut state = parent.state.clone();
            let bank = destroy(instance, &guidance, &mut state, mode, DestroyOp::ALL[d], params.taboo, &mut rng);
            repair(instance, &guidance, &mut state, mode, RepairOp::ALL[r], &bank, params.rule, &mut rng);
            #[cfg(debug_assertions)]
            check_feasible(instance, mode, &state);
            let child = Individual::new(instance, state);

            let outcome = Outcome::classify(&child.objectives, &archive.points());
            let score = params.scores.score(outcome, &mut rng);
            destroy_stats.add_score(d, score);
            repair_stats.add_score(r, score);
            archive.offer(child.objectives, child.state.clone(), &mut rng);
            record(&mut elite, child.objectives);
            offspring.push(child);
        }
        let mut pool = std::mem::take(&mut pop);
        pool.extend(offspring);
        pop = match elitism {
            Elitism::Crowded => crowded_survivors(pool, params.ns),
            Elitism::Random => random_survivors(pool, params.ns, &mut rng),
        };
        assign_fitness(&mut pop);
        destroy_stats.update();
        repair_stats.update();
        trace.push(row(iteration, hv(&elite), archive.len(), &destroy_stats, &repair_stats, destroy_uses, repair_uses));
    }

    let mut front: Vec<Individual> =
        archive.into_members().into_iter().map(|(_, state)| Individual::new(instance, state)).collect();
    front.sort_by(|a, b| {
        a.objectives.f1.total_cmp(&b.objectives.f1).then(a.objectives.f2.total_cmp(&b.objectives.f2))
    });
    assign_fitness(&mut front);
    debug_assert_eq!(pareto_filter(&front.iter().map(|i| i.objectives).collect::<Vec<_>>()).len(), front.len());
    RunResult { front, trace }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::InstanceBuilder;
    use crate::model::validate_schedule;

    fn small() -> Instance {
        InstanceBuilder::new()
            .satellite(1, 10.0)
            .satellite(2, 10.0)
            .station(1)
            .station(2)
            .window(1, 1, 1, 0.0, 300.0)
            .window(2, 2, 1, 1000.0, 1400.0)
            .window(3, 1, 2, 100.0, 500.0)
            .datum(1, 1, 3, 120.0, 0.0)
            .datum(2, 1, 7, 150.0, 0.0)
            .datum(3, 1, 9, 200.0, 0.0)
            .datum(4, 2, 5, 250.0, 0.0)
            .datum(5, 2, 2, 100.0, 0.0)
            .build()
    }

    fn params(max_iter: usize, seed: u64) -> RunParams {
        RunParams { ns: 10, na: 10, max_iter, seed, ..RunParams::default() }
    }

    #[test]
    fn zero_iterations_archive_the_initial_population() {
        let inst = small();
        let res = run(&inst, SolveMode::default(), &params(0, 1));
        assert_eq!(res.trace.len(), 1);
        assert!(!res.front.is_empty());
        let pts = res.points();
        assert_eq!(pareto_filter(&pts).len(), pts.len());
    }

    #[test]
    fn runs_are_feasible_monotone_and_deterministic() {
        let inst = small();
        for mode in SolveMode::ALL {
            let a = run(&inst, mode, &params(15, 4));
            let b = run(&inst, mode, &params(15, 4));
            assert_eq!(a.points(), b.points());
            assert_eq!(a.trace, b.trace);
            assert!(a.trace.windows(2).all(|w| w[1].hv >= w[0].hv));
            for ind in &a.front {
                assert!(validate_schedule(&inst, &ind.schedule(&inst), mode).unwrap().is_empty());
            }
            let c = run_crem(&inst, mode, &params(15, 4));
            assert!(c.front.len() <= 10);
        }
    }

    #[test]
    fn saturated_instance_reaches_zero_failure() {
        let inst = InstanceBuilder::new()
            .satellite(1, 10.0)
            .station(1)
            .window(1, 1, 1, 0.0, 1000.0)
            .datum(1, 1, 3, 100.0, 0.0)
            .datum(2, 1, 8, 100.0, 0.0)
            .build();
        let res = run(&inst, SolveMode::default(), &params(5, 0));
        assert!(res.points().iter().any(|p| p.f1 == 0.0));
    }

    #[test]
    fn weights_stay_normalised() {
        let res = run(&small(), SolveMode::default(), &params(10, 2));
        for row in &res.trace {
            assert!((row.destroy_weights.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            assert!((row.repair_weights.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }
}
