use super::delete::delete_from;
use super::{argmax_lowest_id, check_epsilon, Algorithm, RoundRecord, RunParams, RunTrace};
use crate::constraints::PackingConstraint;
use crate::oracle::Oracle;
use crate::{Error, IdSet, Result};

/// Multiplicative-updates greedy for `A x_S <= b` with `lambda = e^{epsilon W}`.
///
/// Each round adds the element of best density `f(j | S) / sum_i A_ij w_i`,
/// stops on a non-positive gain, runs `delete`, and scales every row weight
/// by `lambda^{A_ij / b_i}`. The loop ends once `sum_i b_i w_i` exceeds
/// `lambda`; if the final set overflows a row the last added element is
/// dropped, which restores feasibility.
///
/// A warning is attached when `W < max(ln m, 1) / epsilon^2`, in which case
/// the approximation guarantee does not apply.
pub fn mw_packing(oracle: &Oracle, packing: &PackingConstraint, epsilon: f64) -> Result<RunTrace> {
    mw_packing_with_lambda(oracle, packing, epsilon, None)
}

/// [`mw_packing`] with an optional explicit `lambda > 1`.
pub fn mw_packing_with_lambda(
    oracle: &Oracle,
    packing: &PackingConstraint,
    epsilon: f64,
    lambda_override: Option<f64>,
) -> Result<RunTrace> {
    check_epsilon(epsilon)?;
    let n = oracle.n();
    if packing.columns() != n {
        return Err(Error::MalformedInstance(format!(
            "packing matrix has {} columns for a ground set of {n}",
            packing.columns()
        )));
    }
    let width = packing.width()?;
    let lambda = match lambda_override {
        Some(l) if l > 1.0 && l.is_finite() => l,
        Some(l) => {
            return Err(Error::InvalidParameter(format!(
                "lambda must be a finite value above 1, got {l}"
            )))
        }
        None => (epsilon * width).exp(),
    };
    if !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "lambda = exp({epsilon} * {width}) overflows"
        )));
    }

    let mut warnings = Vec::new();
    let threshold = (packing.m() as f64).ln().max(1.0) / (epsilon * epsilon);
    if width < threshold {
        warnings.push(format!(
            "width {width} is below max(ln m, 1) / epsilon^2 = {threshold}; \
             the approximation ratio is not guaranteed"
        ));
    }

    let run = run_multiplicative_updates(oracle, packing, lambda, &IdSet::full(n), &IdSet::new())?;
    Ok(RunTrace {
        algorithm: Algorithm::MwPacking,
        params: RunParams {
            epsilon: Some(epsilon),
            lambda: Some(lambda),
            lambda_override: lambda_override.map(|_| true),
            width: Some(width),
            ..RunParams::default()
        },
        initial_value: run.initial_value,
        rounds: run.rounds,
        final_set: run.set,
        final_value: run.value,
        total_queries: run.queries,
        warnings,
    })
}

pub(crate) struct MwRun {
    pub initial_value: f64,
    pub rounds: Vec<RoundRecord>,
    pub set: IdSet,
    pub value: f64,
    pub queries: u64,
}

/// Core loop. Only elements of `candidates` may be added; the run starts
/// from `seed`, whose members are never removed. Columns of `seed` members
/// are expected to be zero (their consumption already left the budget).
/// `lambda` may be infinite when every column is zero.
pub(crate) fn run_multiplicative_updates(
    oracle: &Oracle,
    packing: &PackingConstraint,
    lambda: f64,
    candidates: &IdSet,
    seed: &IdSet,
) -> Result<MwRun> {
    let start = oracle.query_count();
    let (a, b) = (packing.a(), packing.b());
    let mut weights: Vec<f64> = b.iter().map(|&bi| 1.0 / bi).collect();
    let beta = |w: &[f64]| w.iter().zip(b).map(|(wi, bi)| wi * bi).sum::<f64>();

    let mut set = seed.clone();
    let mut value = oracle.eval(&set)?;
    let initial_value = value;
    let mut rounds = Vec::new();
    let mut last_added = None;

    loop {
        let beta_now = beta(&weights);
        let open: Vec<usize> = candidates.iter().filter(|&j| !set.contains(j)).collect();
        if beta_now > lambda || open.is_empty() || !packing.is_feasible(&set)? {
            break;
        }

        let mut free = Vec::new();
        let mut priced = Vec::new();
        let mut evaluated = Vec::with_capacity(open.len());
        for &j in &open {
            set.insert(j);
            let with = oracle.eval(&set)?;
            set.remove(j);
            let gain = with - value;
            let price: f64 = a.iter().zip(&weights).map(|(row, wi)| row[j] * wi).sum();
            evaluated.push((j, with, price));
            if price > 0.0 {
                priced.push((j, gain / price));
            } else if gain > 0.0 {
                free.push((j, gain));
            }
        }
        // Unpriced elements have infinite density whenever their gain is positive.
        let Some((selected, _)) = argmax_lowest_id(&free).or_else(|| argmax_lowest_id(&priced))
        else {
            break;
        };
        let &(_, with, price) = evaluated.iter().find(|e| e.0 == selected).unwrap();
        if with - value <= 0.0 {
            break;
        }

        set.insert(selected);
        let before_delete = set.clone();
        (set, value) = delete_from(oracle, set, with, seed)?;
        for (wi, (row, bi)) in weights.iter_mut().zip(a.iter().zip(b)) {
            *wi *= lambda.powf(row[selected] / bi);
        }
        last_added = Some(selected);
        rounds.push(RoundRecord {
            index: rounds.len() + 1,
            selected,
            swapped_out: None,
            before_delete,
            after_delete: set.clone(),
            value,
            queries: oracle.query_count() - start,
            price: Some(price),
            beta: Some(beta_now),
        });
    }

    if !packing.is_feasible(&set)? {
        if let Some(j) = last_added.filter(|&j| set.contains(j)) {
            set.remove(j);
            value = oracle.eval(&set)?;
        }
        if !packing.is_feasible(&set)? {
            return Err(Error::Internal(format!(
                "packing output {set:?} is infeasible after dropping the last element"
            )));
        }
    }

    Ok(MwRun {
        initial_value,
        rounds,
        set,
        value,
        queries: oracle.query_count() - start,
    })
}
