//! Minimal neural substrate: f64 tensors, a reverse-mode tape, embedding,
//! feed-forward and GRU layers, SGD, and a weights file format.

mod graph;
mod io;
mod params;
mod tensor;

pub use graph::{Grads, Graph, NodeId};
pub use io::{decode, encode, load_weights, save_weights, WeightsError, WeightsFile, FORMAT_VERSION, MAGIC};
pub use params::{FeedForward, GruParams, ParamId, ParamStore};
pub use tensor::{gemm, matmul, Tensor};

/// Numerically stable softmax of a slice.
pub fn softmax(xs: &[f64]) -> Vec<f64> {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = xs.iter().map(|x| (x - m).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

/// Largest relative error between an analytic gradient and a central finite
/// difference over the entries `entries` of parameter `id`.
pub fn grad_check(
    store: &mut ParamStore,
    id: ParamId,
    entries: &[usize],
    step: f64,
    mut loss: impl FnMut(&ParamStore) -> f64,
    analytic: &Tensor,
) -> f64 {
    let mut worst = 0.0f64;
    for &i in entries {
        let orig = store.get(id).data[i];
        store.get_mut(id).data[i] = orig + step;
        let up = loss(store);
        store.get_mut(id).data[i] = orig - step;
        let down = loss(store);
        store.get_mut(id).data[i] = orig;
        let numeric = (up - down) / (2.0 * step);
        let a = analytic.data[i];
        let denom = a.abs().max(numeric.abs());
        let err = if denom < 1e-10 {
            (a - numeric).abs()
        } else {
            (a - numeric).abs() / denom
        };
        worst = worst.max(err);
    }
    worst
}
