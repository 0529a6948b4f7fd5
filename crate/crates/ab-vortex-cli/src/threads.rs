//! Order-preserving fan-out for grid evaluation.
//!
//! `AB_VORTEX_THREADS` caps the number of worker threads. Results are
//! spliced back in input order, so output bytes never depend on scheduling.

/// Worker-thread cap from the environment; 1 when unset or unparseable.
pub fn thread_cap() -> usize {
    std::env::var("AB_VORTEX_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(1)
}

/// Map `f` over `items`, fanning out to at most `threads` workers while
/// keeping the output in input order.
pub fn ordered_parallel_map<T, U, F>(items: &[T], threads: usize, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync,
{
    let threads = threads.max(1).min(items.len().max(1));
    if threads == 1 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(threads);
    let mut chunks: Vec<Vec<U>> = Vec::new();
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|slice| scope.spawn(|| slice.iter().map(&f).collect::<Vec<U>>()))
            .collect();
        chunks = handles.into_iter().map(|h| h.join().unwrap()).collect();
    });
    chunks.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved_for_any_thread_count() {
        let items: Vec<usize> = (0..1000).collect();
        let serial = ordered_parallel_map(&items, 1, |x| x * 3);
        for threads in [2, 3, 7, 64] {
            let parallel = ordered_parallel_map(&items, threads, |x| x * 3);
            assert_eq!(parallel, serial, "threads={threads}");
        }
    }

    #[test]
    fn handles_empty_input() {
        let items: Vec<usize> = Vec::new();
        assert!(ordered_parallel_map(&items, 4, |x| *x).is_empty());
    }
}
