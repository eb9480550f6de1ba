//! Reverse-mode differentiation over a tape of 2-D tensor ops.
//!
//! Parameters are borrowed from a [`ParamStore`] rather than copied into the
//! tape; their gradients are accumulated into a [`Grads`] buffer of the same
//! layout.

use super::params::{FeedForward, GruParams, ParamId, ParamStore};
use super::tensor::{gemm, Tensor};

pub type NodeId = usize;

/// Saved activations of a GRU step, needed by its backward pass.
struct GruCache {
    r: Tensor,
    z: Tensor,
    n: Tensor,
    /// `h · W_hn + b_hn`, the hidden contribution to the candidate.
    hn: Tensor,
}

enum Op {
    Input,
    Param(ParamId),
    MatMul(NodeId, NodeId),
    /// `a` plus a 1×n bias row broadcast over rows.
    AddBias(NodeId, NodeId),
    Add(NodeId, NodeId),
    Relu(NodeId),
    Tanh(NodeId),
    Sigmoid(NodeId),
    ConcatCols(Vec<NodeId>),
    ConcatRows(Vec<NodeId>),
    Gather(ParamId, Vec<usize>),
    RepeatRows(NodeId),
    SelectRows(NodeId, Vec<usize>),
    AddConst(NodeId),
    LogSoftmaxRows(NodeId),
    LogSoftmaxAll(NodeId),
    SegmentLogSumExp(NodeId, Vec<Vec<usize>>),
    Pick(NodeId, Vec<usize>),
    Sum(NodeId),
    Scale(NodeId, f64),
    Gru {
        x: NodeId,
        h: NodeId,
        cell: GruParams,
        mask: Option<Vec<bool>>,
        cache: GruCache,
    },
}

struct Node {
    /// Empty for `Param` nodes; read through the store instead.
    value: Tensor,
    op: Op,
}

/// Dense gradient buffers mirroring a [`ParamStore`].
#[derive(Clone, Debug, PartialEq)]
pub struct Grads(pub Vec<Tensor>);

impl Grads {
    pub fn zeros_like(store: &ParamStore) -> Grads {
        Grads(store.tensors().iter().map(|t| Tensor::zeros(t.rows, t.cols)).collect())
    }

    pub fn get(&self, id: ParamId) -> &Tensor {
        &self.0[id.0]
    }

    pub fn add_assign(&mut self, other: &Grads) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            a.add_assign(b);
        }
    }
}

pub struct Graph<'p> {
    params: &'p ParamStore,
    nodes: Vec<Node>,
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

fn log_sum_exp(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let m = xs.clone().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.map(|x| (x - m).exp()).sum::<f64>().ln()
}

fn map(t: &Tensor, f: impl Fn(f64) -> f64) -> Tensor {
    Tensor::from_vec(t.rows, t.cols, t.data.iter().map(|&x| f(x)).collect())
}

impl<'p> Graph<'p> {
    pub fn new(params: &'p ParamStore) -> Graph<'p> {
        Graph {
            params,
            nodes: Vec::new(),
        }
    }

    pub fn value(&self, id: NodeId) -> &Tensor {
        match self.nodes[id].op {
            Op::Param(p) => self.params.get(p),
            _ => &self.nodes[id].value,
        }
    }

    fn push(&mut self, value: Tensor, op: Op) -> NodeId {
        self.nodes.push(Node { value, op });
        self.nodes.len() - 1
    }

    pub fn input(&mut self, t: Tensor) -> NodeId {
        self.push(t, Op::Input)
    }

    pub fn param(&mut self, p: ParamId) -> NodeId {
        self.push(Tensor::zeros(0, 0), Op::Param(p))
    }

    pub fn matmul(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let (va, vb) = (self.value(a), self.value(b));
        let mut out = Tensor::zeros(va.rows, vb.cols);
        gemm(va, false, vb, false, 0.0, &mut out);
        self.push(out, Op::MatMul(a, b))
    }

    pub fn add_bias(&mut self, a: NodeId, bias: NodeId) -> NodeId {
        let mut out = self.value(a).clone();
        let b = self.value(bias);
        assert_eq!((b.rows, b.cols), (1, out.cols), "bias shape mismatch");
        for r in 0..out.rows {
            for (x, y) in out.row_slice_mut(r).iter_mut().zip(&b.data) {
                *x += y;
            }
        }
        self.push(out, Op::AddBias(a, bias))
    }

    /// `x · W + b` for parameters `w` and `b`.
    pub fn affine(&mut self, x: NodeId, w: ParamId, b: ParamId) -> NodeId {
        let w = self.param(w);
        let b = self.param(b);
        let xw = self.matmul(x, w);
        self.add_bias(xw, b)
    }

    /// Affine layers with a rectifier between consecutive layers.
    pub fn feedforward(&mut self, x: NodeId, ff: &FeedForward) -> NodeId {
        let mut h = x;
        for (i, &(w, b)) in ff.layers.iter().enumerate() {
            if i > 0 {
                h = self.relu(h);
            }
            h = self.affine(h, w, b);
        }
        h
    }

    pub fn add(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let mut out = self.value(a).clone();
        out.add_assign(self.value(b));
        self.push(out, Op::Add(a, b))
    }

    pub fn relu(&mut self, a: NodeId) -> NodeId {
        let out = map(self.value(a), |x| x.max(0.0));
        self.push(out, Op::Relu(a))
    }

    pub fn tanh(&mut self, a: NodeId) -> NodeId {
        let out = map(self.value(a), f64::tanh);
        self.push(out, Op::Tanh(a))
    }

    pub fn sigmoid(&mut self, a: NodeId) -> NodeId {
        let out = map(self.value(a), sigmoid);
        self.push(out, Op::Sigmoid(a))
    }

    pub fn concat_cols(&mut self, parts: &[NodeId]) -> NodeId {
        let rows = self.value(parts[0]).rows;
        let cols: usize = parts.iter().map(|&p| self.value(p).cols).sum();
        let mut out = Tensor::zeros(rows, cols);
        for r in 0..rows {
            let mut off = 0;
            for &p in parts {
                let v = self.value(p);
                assert_eq!(v.rows, rows, "row count mismatch in concat_cols");
                out.row_slice_mut(r)[off..off + v.cols].copy_from_slice(v.row_slice(r));
                off += v.cols;
            }
        }
        self.push(out, Op::ConcatCols(parts.to_vec()))
    }

    pub fn concat_rows(&mut self, parts: &[NodeId]) -> NodeId {
        let cols = self.value(parts[0]).cols;
        let mut data = Vec::new();
        for &p in parts {
            let v = self.value(p);
            assert_eq!(v.cols, cols, "column count mismatch in concat_rows");
            data.extend_from_slice(&v.data);
        }
        let rows = data.len() / cols.max(1);
        self.push(Tensor::from_vec(rows, cols, data), Op::ConcatRows(parts.to_vec()))
    }

    /// Rows `ids` of an embedding table.
    pub fn gather(&mut self, table: ParamId, ids: &[usize]) -> NodeId {
        let t = self.params.get(table);
        let mut out = Tensor::zeros(ids.len(), t.cols);
        for (r, &i) in ids.iter().enumerate() {
            out.row_slice_mut(r).copy_from_slice(t.row_slice(i));
        }
        self.push(out, Op::Gather(table, ids.to_vec()))
    }

    /// Stack `n` copies of the 1×c row `a`.
    pub fn repeat_rows(&mut self, a: NodeId, n: usize) -> NodeId {
        let v = self.value(a);
        assert_eq!(v.rows, 1, "repeat_rows expects a single row");
        let data = v.data.repeat(n);
        let out = Tensor::from_vec(n, v.cols, data);
        self.push(out, Op::RepeatRows(a))
    }

    /// Rows `idx` of `a`, in that order (repetition allowed).
    pub fn select_rows(&mut self, a: NodeId, idx: &[usize]) -> NodeId {
        let v = self.value(a);
        let mut out = Tensor::zeros(idx.len(), v.cols);
        for (r, &i) in idx.iter().enumerate() {
            out.row_slice_mut(r).copy_from_slice(v.row_slice(i));
        }
        self.push(out, Op::SelectRows(a, idx.to_vec()))
    }

    /// `a + c` for a constant `c` of the same shape (no gradient to `c`).
    pub fn add_const(&mut self, a: NodeId, c: &Tensor) -> NodeId {
        let mut out = self.value(a).clone();
        out.add_assign(c);
        self.push(out, Op::AddConst(a))
    }

    pub fn log_softmax_rows(&mut self, a: NodeId) -> NodeId {
        let v = self.value(a);
        let mut out = v.clone();
        for r in 0..v.rows {
            let lse = log_sum_exp(v.row_slice(r).iter().copied());
            out.row_slice_mut(r).iter_mut().for_each(|x| *x -= lse);
        }
        self.push(out, Op::LogSoftmaxRows(a))
    }

    /// Log-softmax over every entry of `a` at once.
    pub fn log_softmax_all(&mut self, a: NodeId) -> NodeId {
        let v = self.value(a);
        let lse = log_sum_exp(v.data.iter().copied());
        let out = map(v, |x| x - lse);
        self.push(out, Op::LogSoftmaxAll(a))
    }

    /// k×1 column whose i-th entry is the log-sum-exp of the flat entries
    /// `segments[i]` of `a`.
    pub fn segment_logsumexp(&mut self, a: NodeId, segments: Vec<Vec<usize>>) -> NodeId {
        let v = self.value(a);
        let data = segments
            .iter()
            .map(|s| log_sum_exp(s.iter().map(|&i| v.data[i])))
            .collect::<Vec<_>>();
        let out = Tensor::from_vec(data.len(), 1, data);
        self.push(out, Op::SegmentLogSumExp(a, segments))
    }

    /// k×1 column of the flat entries `idx` of `a`.
    pub fn pick(&mut self, a: NodeId, idx: &[usize]) -> NodeId {
        let v = self.value(a);
        let data: Vec<f64> = idx.iter().map(|&i| v.data[i]).collect();
        let out = Tensor::from_vec(data.len(), 1, data);
        self.push(out, Op::Pick(a, idx.to_vec()))
    }

    pub fn sum(&mut self, a: NodeId) -> NodeId {
        let s = self.value(a).data.iter().sum();
        self.push(Tensor::scalar(s), Op::Sum(a))
    }

    pub fn scale(&mut self, a: NodeId, s: f64) -> NodeId {
        let out = map(self.value(a), |x| x * s);
        self.push(out, Op::Scale(a, s))
    }

    /// Negative log-likelihood of the labeled entries of a log-probability
    /// tensor, summed.
    pub fn nll(&mut self, logp: NodeId, idx: &[usize]) -> NodeId {
        let p = self.pick(logp, idx);
        let s = self.sum(p);
        self.scale(s, -1.0)
    }

    /// One GRU step over a batch of rows. `x` may have fewer rows than `h`
    /// as long as they tile it: state row `i` reads input row `i % x.rows`.
    /// Rows whose mask entry is false carry their state through unchanged.
    pub fn gru(&mut self, x: NodeId, h: NodeId, cell: GruParams, mask: Option<Vec<bool>>) -> NodeId {
        let (xv, hv) = (self.value(x), self.value(h));
        let hs = cell.hidden;
        let rows = hv.rows;
        let xr = xv.rows;
        assert!(xr > 0 && rows % xr == 0, "GRU state rows must tile the input rows");
        assert_eq!(hv.cols, hs, "GRU state width mismatch");
        if let Some(m) = &mask {
            assert_eq!(m.len(), rows, "GRU mask length mismatch");
        }
        let p = self.params;
        let mut gx = Tensor::zeros(xr, 3 * hs);
        gemm(xv, false, p.get(cell.wx), false, 0.0, &mut gx);
        let mut gh = Tensor::zeros(rows, 3 * hs);
        gemm(hv, false, p.get(cell.wh), false, 0.0, &mut gh);
        let (bx, bh) = (p.get(cell.bx), p.get(cell.bh));
        let mut r = Tensor::zeros(rows, hs);
        let mut z = Tensor::zeros(rows, hs);
        let mut n = Tensor::zeros(rows, hs);
        let mut hn = Tensor::zeros(rows, hs);
        let mut out = Tensor::zeros(rows, hs);
        for i in 0..rows {
            let (gxr, ghr, hr) = (gx.row_slice(i % xr), gh.row_slice(i), hv.row_slice(i));
            let keep = mask.as_ref().is_some_and(|m| !m[i]);
            for j in 0..hs {
                let rj = sigmoid(gxr[j] + bx.data[j] + ghr[j] + bh.data[j]);
                let zj = sigmoid(gxr[hs + j] + bx.data[hs + j] + ghr[hs + j] + bh.data[hs + j]);
                let hnj = ghr[2 * hs + j] + bh.data[2 * hs + j];
                let nj = (gxr[2 * hs + j] + bx.data[2 * hs + j] + rj * hnj).tanh();
                r.row_slice_mut(i)[j] = rj;
                z.row_slice_mut(i)[j] = zj;
                n.row_slice_mut(i)[j] = nj;
                hn.row_slice_mut(i)[j] = hnj;
                out.row_slice_mut(i)[j] = if keep { hr[j] } else { (1.0 - zj) * nj + zj * hr[j] };
            }
        }
        let cache = GruCache { r, z, n, hn };
        self.push(
            out,
            Op::Gru {
                x,
                h,
                cell,
                mask,
                cache,
            },
        )
    }

    /// Back-propagate from the scalar `loss`, adding parameter gradients
    /// into `grads`.
    pub fn backward(&self, loss: NodeId, grads: &mut Grads) {
        assert_eq!(self.value(loss).shape(), (1, 1), "loss must be a scalar");
        let mut g: Vec<Option<Tensor>> = (0..self.nodes.len()).map(|_| None).collect();
        g[loss] = Some(Tensor::scalar(1.0));
        for id in (0..=loss).rev() {
            let Some(d) = g[id].take() else { continue };
            self.backward_node(id, &d, &mut g, grads);
        }
    }

    fn backward_node(&self, id: NodeId, d: &Tensor, g: &mut [Option<Tensor>], grads: &mut Grads) {
        let acc = |g: &mut [Option<Tensor>], k: NodeId, t: Tensor| match &mut g[k] {
            Some(e) => e.add_assign(&t),
            slot @ None => *slot = Some(t),
        };
        let val = &self.nodes[id].value;
        match &self.nodes[id].op {
            Op::Input => {}
            Op::Param(p) => grads.0[p.0].add_assign(d),
            Op::MatMul(a, b) => {
                let (va, vb) = (self.value(*a), self.value(*b));
                let mut da = Tensor::zeros(va.rows, va.cols);
                gemm(d, false, vb, true, 0.0, &mut da);
                let mut db = Tensor::zeros(vb.rows, vb.cols);
                gemm(va, true, d, false, 0.0, &mut db);
                acc(g, *a, da);
                acc(g, *b, db);
            }
            Op::AddBias(a, b) => {
                let mut db = Tensor::zeros(1, d.cols);
                for r in 0..d.rows {
                    for (x, y) in db.data.iter_mut().zip(d.row_slice(r)) {
                        *x += y;
                    }
                }
                acc(g, *a, d.clone());
                acc(g, *b, db);
            }
            Op::Add(a, b) => {
                acc(g, *a, d.clone());
                acc(g, *b, d.clone());
            }
            Op::AddConst(a) | Op::Sum(a) | Op::Scale(a, _) | Op::RepeatRows(a) => {
                let va = self.value(*a);
                let t = match &self.nodes[id].op {
                    Op::AddConst(_) => d.clone(),
                    Op::Sum(_) => Tensor::from_vec(va.rows, va.cols, vec![d.data[0]; va.len()]),
                    Op::Scale(_, s) => map(d, |x| x * s),
                    _ => {
                        let mut t = Tensor::zeros(1, va.cols);
                        for r in 0..d.rows {
                            for (x, y) in t.data.iter_mut().zip(d.row_slice(r)) {
                                *x += y;
                            }
                        }
                        t
                    }
                };
                acc(g, *a, t);
            }
            Op::Relu(a) => {
                let va = self.value(*a);
                let t = Tensor::from_vec(
                    d.rows,
                    d.cols,
                    d.data
                        .iter()
                        .zip(&va.data)
                        .map(|(&dy, &x)| if x > 0.0 { dy } else { 0.0 })
                        .collect(),
                );
                acc(g, *a, t);
            }
            Op::Tanh(a) => {
                let t = Tensor::from_vec(
                    d.rows,
                    d.cols,
                    d.data
                        .iter()
                        .zip(&val.data)
                        .map(|(&dy, &y)| dy * (1.0 - y * y))
                        .collect(),
                );
                acc(g, *a, t);
            }
            Op::Sigmoid(a) => {
                let t = Tensor::from_vec(
                    d.rows,
                    d.cols,
                    d.data
                        .iter()
                        .zip(&val.data)
                        .map(|(&dy, &y)| dy * y * (1.0 - y))
                        .collect(),
                );
                acc(g, *a, t);
            }
            Op::ConcatCols(parts) => {
                let mut off = 0;
                for &p in parts {
                    let c = self.value(p).cols;
                    let mut t = Tensor::zeros(d.rows, c);
                    for r in 0..d.rows {
                        t.row_slice_mut(r).copy_from_slice(&d.row_slice(r)[off..off + c]);
                    }
                    off += c;
                    acc(g, p, t);
                }
            }
            Op::ConcatRows(parts) => {
                let mut off = 0;
                for &p in parts {
                    let v = self.value(p);
                    let t = Tensor::from_vec(v.rows, v.cols, d.data[off..off + v.len()].to_vec());
                    off += v.len();
                    acc(g, p, t);
                }
            }
            Op::SelectRows(a, idx) => {
                let va = self.value(*a);
                let mut t = Tensor::zeros(va.rows, va.cols);
                for (r, &i) in idx.iter().enumerate() {
                    for (x, y) in t.row_slice_mut(i).iter_mut().zip(d.row_slice(r)) {
                        *x += y;
                    }
                }
                acc(g, *a, t);
            }
            Op::Gather(table, ids) => {
                let gt = &mut grads.0[table.0];
                for (r, &i) in ids.iter().enumerate() {
                    for (x, y) in gt.row_slice_mut(i).iter_mut().zip(d.row_slice(r)) {
                        *x += y;
                    }
                }
            }
            Op::LogSoftmaxRows(a) => {
                let mut t = d.clone();
                for r in 0..d.rows {
                    let s: f64 = d.row_slice(r).iter().sum();
                    for (x, y) in t.row_slice_mut(r).iter_mut().zip(val.row_slice(r)) {
                        *x -= y.exp() * s;
                    }
                }
                acc(g, *a, t);
            }
            Op::LogSoftmaxAll(a) => {
                let s: f64 = d.data.iter().sum();
                let t = Tensor::from_vec(
                    d.rows,
                    d.cols,
                    d.data.iter().zip(&val.data).map(|(&dy, &y)| dy - y.exp() * s).collect(),
                );
                acc(g, *a, t);
            }
            Op::SegmentLogSumExp(a, segments) => {
                let va = self.value(*a);
                let mut t = Tensor::zeros(va.rows, va.cols);
                for (k, seg) in segments.iter().enumerate() {
                    for &i in seg {
                        t.data[i] += d.data[k] * (va.data[i] - val.data[k]).exp();
                    }
                }
                acc(g, *a, t);
            }
            Op::Pick(a, idx) => {
                let va = self.value(*a);
                let mut t = Tensor::zeros(va.rows, va.cols);
                for (k, &i) in idx.iter().enumerate() {
                    t.data[i] += d.data[k];
                }
                acc(g, *a, t);
            }
            Op::Gru {
                x,
                h,
                cell,
                mask,
                cache,
            } => {
                let (xv, hv) = (self.value(*x), self.value(*h));
                let hs = cell.hidden;
                let rows = d.rows;
                let mut dgx = Tensor::zeros(rows, 3 * hs);
                let mut dgh = Tensor::zeros(rows, 3 * hs);
                let mut dh = Tensor::zeros(rows, hs);
                for i in 0..rows {
                    let dy = d.row_slice(i);
                    if mask.as_ref().is_some_and(|m| !m[i]) {
                        dh.row_slice_mut(i).copy_from_slice(dy);
                        continue;
                    }
                    let hr = hv.row_slice(i);
                    let (r, z, n, hn) = (
                        cache.r.row_slice(i),
                        cache.z.row_slice(i),
                        cache.n.row_slice(i),
                        cache.hn.row_slice(i),
                    );
                    for j in 0..hs {
                        let dn = dy[j] * (1.0 - z[j]) * (1.0 - n[j] * n[j]);
                        let dz = dy[j] * (hr[j] - n[j]) * z[j] * (1.0 - z[j]);
                        let dr = dn * hn[j] * r[j] * (1.0 - r[j]);
                        dh.row_slice_mut(i)[j] = dy[j] * z[j];
                        let gxr = dgx.row_slice_mut(i);
                        gxr[j] = dr;
                        gxr[hs + j] = dz;
                        gxr[2 * hs + j] = dn;
                        let ghr = dgh.row_slice_mut(i);
                        ghr[j] = dr;
                        ghr[hs + j] = dz;
                        ghr[2 * hs + j] = dn * r[j];
                    }
                }
                let p = self.params;
                if xv.rows < rows {
                    let mut folded = Tensor::zeros(xv.rows, 3 * hs);
                    for i in 0..rows {
                        for (a, b) in folded.row_slice_mut(i % xv.rows).iter_mut().zip(dgx.row_slice(i)) {
                            *a += b;
                        }
                    }
                    dgx = folded;
                }
                let mut dx = Tensor::zeros(xv.rows, xv.cols);
                gemm(&dgx, false, p.get(cell.wx), true, 0.0, &mut dx);
                gemm(&dgh, false, p.get(cell.wh), true, 1.0, &mut dh);
                gemm(xv, true, &dgx, false, 1.0, &mut grads.0[cell.wx.0]);
                gemm(hv, true, &dgh, false, 1.0, &mut grads.0[cell.wh.0]);
                for (bias, src) in [(cell.bx, &dgx), (cell.bh, &dgh)] {
                    let gb = &mut grads.0[bias.0];
                    for r in 0..src.rows {
                        for (x, y) in gb.data.iter_mut().zip(src.row_slice(r)) {
                            *x += y;
                        }
                    }
                }
                acc(g, *x, dx);
                acc(g, *h, dh);
            }
        }
    }
}
