//! Order-preserving parallel map over an index range. Work is handed out
//! in chunks through an atomic cursor; results land in per-chunk slots and
//! are stitched back in index order, so the output is identical for any
//! thread count.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

pub(crate) fn parallel_map_indexed<T, F>(n: usize, threads: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    if n == 0 || threads <= 1 {
        return (0..n).map(f).collect();
    }
    let chunk = n.div_ceil(threads * 8).max(1);
    let n_chunks = n.div_ceil(chunk);
    let workers = threads.min(n_chunks);

    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Vec<T>>>> = Mutex::new((0..n_chunks).map(|_| None).collect());
    thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let ci = next.fetch_add(1, Ordering::Relaxed);
                if ci >= n_chunks {
                    break;
                }
                let start = ci * chunk;
                let end = (start + chunk).min(n);
                let out: Vec<T> = (start..end).map(&f).collect();
                slots.lock().expect("chunk slots")[ci] = Some(out);
            });
        }
    });
    slots
        .into_inner()
        .expect("chunk slots")
        .into_iter()
        .flat_map(|v| v.expect("chunk computed"))
        .collect()
}
