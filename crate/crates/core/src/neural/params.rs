use rand::Rng;

use super::graph::Grads;
use super::tensor::Tensor;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ParamId(pub usize);

/// Handles to the parameters of one GRU cell. Gate blocks are laid out as
/// `[reset | update | candidate]` along the columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GruParams {
    pub wx: ParamId,
    pub wh: ParamId,
    pub bx: ParamId,
    pub bh: ParamId,
    pub hidden: usize,
}

/// Handles to a stack of affine layers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeedForward {
    pub layers: Vec<(ParamId, ParamId)>,
}

/// Named parameter tensors in insertion order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ParamStore {
    names: Vec<String>,
    values: Vec<Tensor>,
}

fn uniform(rows: usize, cols: usize, bound: f64, rng: &mut impl Rng) -> Tensor {
    let data = (0..rows * cols).map(|_| rng.gen_range(-bound..=bound)).collect();
    Tensor::from_vec(rows, cols, data)
}

impl ParamStore {
    pub fn new() -> ParamStore {
        ParamStore::default()
    }

    pub fn add(&mut self, name: &str, t: Tensor) -> ParamId {
        assert!(!self.names.iter().any(|n| n == name), "duplicate parameter {name}");
        self.names.push(name.to_owned());
        self.values.push(t);
        ParamId(self.values.len() - 1)
    }

    /// Uniform in ±1/√fan_in.
    pub fn add_uniform(&mut self, name: &str, rows: usize, cols: usize, fan_in: usize, rng: &mut impl Rng) -> ParamId {
        let bound = 1.0 / (fan_in.max(1) as f64).sqrt();
        self.add(name, uniform(rows, cols, bound, rng))
    }

    /// An embedding table with entries uniform in ±1/√dim.
    pub fn add_embedding(&mut self, name: &str, vocab: usize, dim: usize, rng: &mut impl Rng) -> ParamId {
        self.add_uniform(name, vocab, dim, dim, rng)
    }

    /// Affine layers of widths `dims[0] → dims[1] → …`.
    pub fn add_feedforward(&mut self, name: &str, dims: &[usize], rng: &mut impl Rng) -> FeedForward {
        let layers = dims
            .windows(2)
            .enumerate()
            .map(|(i, w)| {
                let wid = self.add_uniform(&format!("{name}.w{i}"), w[0], w[1], w[0], rng);
                let bid = self.add_uniform(&format!("{name}.b{i}"), 1, w[1], w[0], rng);
                (wid, bid)
            })
            .collect();
        FeedForward { layers }
    }

    pub fn add_gru(&mut self, name: &str, input: usize, hidden: usize, rng: &mut impl Rng) -> GruParams {
        GruParams {
            wx: self.add_uniform(&format!("{name}.wx"), input, 3 * hidden, hidden, rng),
            wh: self.add_uniform(&format!("{name}.wh"), hidden, 3 * hidden, hidden, rng),
            bx: self.add_uniform(&format!("{name}.bx"), 1, 3 * hidden, hidden, rng),
            bh: self.add_uniform(&format!("{name}.bh"), 1, 3 * hidden, hidden, rng),
            hidden,
        }
    }

    pub fn add_gru_zeros(&mut self, name: &str, input: usize, hidden: usize) -> GruParams {
        GruParams {
            wx: self.add(&format!("{name}.wx"), Tensor::zeros(input, 3 * hidden)),
            wh: self.add(&format!("{name}.wh"), Tensor::zeros(hidden, 3 * hidden)),
            bx: self.add(&format!("{name}.bx"), Tensor::zeros(1, 3 * hidden)),
            bh: self.add(&format!("{name}.bh"), Tensor::zeros(1, 3 * hidden)),
            hidden,
        }
    }

    pub fn get(&self, id: ParamId) -> &Tensor {
        &self.values[id.0]
    }

    pub fn get_mut(&mut self, id: ParamId) -> &mut Tensor {
        &mut self.values[id.0]
    }

    pub fn id(&self, name: &str) -> Option<ParamId> {
        self.names.iter().position(|n| n == name).map(ParamId)
    }

    pub fn name(&self, id: ParamId) -> &str {
        &self.names[id.0]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = ParamId> {
        (0..self.values.len()).map(ParamId)
    }

    pub fn tensors(&self) -> &[Tensor] {
        &self.values
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// `p ← p − lr·g` for every parameter.
    pub fn sgd_step(&mut self, grads: &Grads, lr: f64) {
        assert!(lr > 0.0, "learning rate must be positive");
        assert_eq!(grads.0.len(), self.values.len(), "gradient layout mismatch");
        for (p, g) in self.values.iter_mut().zip(&grads.0) {
            assert_eq!(p.shape(), g.shape(), "gradient shape mismatch");
            for (x, d) in p.data.iter_mut().zip(&g.data) {
                *x -= lr * d;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sgd_by_hand() {
        let mut s = ParamStore::new();
        let p = s.add("p", Tensor::scalar(1.0));
        let q = s.add("q", Tensor::scalar(4.0));
        let g = Grads(vec![Tensor::scalar(2.0), Tensor::scalar(0.0)]);
        s.sgd_step(&g, 0.1);
        assert!((s.get(p).data[0] - 0.8).abs() < 1e-15);
        assert_eq!(s.get(q).data[0], 4.0);
    }

    #[test]
    fn init_respects_fan_in() {
        let mut s = ParamStore::new();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let ff = s.add_feedforward("ff", &[16, 4, 2], &mut rng);
        assert_eq!(ff.layers.len(), 2);
        assert_eq!(s.get(ff.layers[0].0).shape(), (16, 4));
        assert!(s.get(ff.layers[0].0).data.iter().all(|x| x.abs() <= 0.25));
        assert_eq!(s.name(ff.layers[1].1), "ff.b1");
        let again = {
            let mut t = ParamStore::new();
            t.add_feedforward("ff", &[16, 4, 2], &mut ChaCha8Rng::seed_from_u64(0));
            t
        };
        assert_eq!(s, again);
    }
}
