//! Collision search spread over threads by first letter.

use std::thread;

use qfalab_core::harness::{enumerate_values, precheck_budget, report_from_values, Automaton, CollisionReport, HarnessError, Partition, DEFAULT_BUDGET};

/// Environment variable that replaces [`DEFAULT_BUDGET`].
pub const BUDGET_VAR: &str = "QFALAB_BUDGET";

/// Word budget from `QFALAB_BUDGET`, or the default when unset.
pub fn budget_from_env() -> Result<u64, String> {
    match std::env::var(BUDGET_VAR) {
        Ok(s) => s.trim().parse().map_err(|_| format!("{BUDGET_VAR} must be a positive integer, got \"{s}\"")),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

/// Same result as `harness::collision_search`, with the partitions
/// distributed round-robin over `jobs` threads.
pub fn parallel_collision_search<A>(aut: &A, max_len: usize, budget: u64, jobs: usize) -> Result<CollisionReport<A::Value>, HarnessError>
where
    A: Automaton + Sync,
    A::Value: Send,
{
    precheck_budget(aut.letters(), max_len, budget)?;
    let parts = Partition::split(aut.letters());
    let jobs = jobs.clamp(1, parts.len());
    let chunks: Vec<Vec<Partition>> = (0..jobs).map(|j| parts.iter().copied().skip(j).step_by(jobs).collect()).collect();
    let results: Vec<Result<Vec<_>, HarnessError>> = thread::scope(|s| {
        let handles: Vec<_> = chunks
            .iter()
            .map(|chunk| {
                s.spawn(move || {
                    let mut out = Vec::new();
                    for &p in chunk {
                        out.extend(enumerate_values(aut, max_len, p)?);
                    }
                    Ok(out)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("search thread panicked")).collect()
    });
    let mut values = Vec::new();
    for r in results {
        values.extend(r?);
    }
    report_from_values(aut, max_len, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qfalab_core::harness::collision_search;
    use qfalab_core::mmpcp::MmpcpInstance;
    use qfalab_core::reduction::compile_injectivity;

    #[test]
    fn threads_do_not_change_the_report() {
        let inst = MmpcpInstance::new(
            vec!["s1".into(), "s2".into()],
            vec!["d1".into()],
            vec![vec![0], vec![0, 0]],
            vec![vec![0, 0], vec![0]],
            false,
        )
        .unwrap();
        let q = compile_injectivity(&inst).unwrap();
        let serial = collision_search(&q, 4, DEFAULT_BUDGET).unwrap();
        assert!(!serial.is_injective());
        for jobs in [1, 2, 3, 16] {
            assert_eq!(parallel_collision_search(&q, 4, DEFAULT_BUDGET, jobs).unwrap(), serial);
        }
        assert!(parallel_collision_search(&q, 12, 1000, 2).is_err());
    }
}
