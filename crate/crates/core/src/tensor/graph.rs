use super::{ParamId, ParamSet, Tensor, TensorError};

/// Handle to a node recorded on a [`Graph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Var(usize);

#[derive(Debug)]
enum Op {
    Constant,
    Param(ParamId),
    MatMul(Var, Var),
    /// Elementwise sum; the right operand may be a single row broadcast
    /// over every row of the left operand.
    Add(Var, Var),
    Sub(Var, Var),
    Mul(Var, Var),
    Scale(Var, f64),
    ConcatCols(Vec<Var>),
    SliceCols(Var, usize),
    Sigmoid(Var),
    Tanh(Var),
    Relu(Var),
    SoftmaxRows(Var),
    Log {
        input: Var,
        floor: f64,
    },
    Abs(Var),
    Clip {
        input: Var,
        lo: f64,
        hi: f64,
    },
    Sum(Var),
    GatherRows {
        table: Var,
        indices: Vec<usize>,
    },
    Pick {
        input: Var,
        indices: Vec<usize>,
    },
}

#[derive(Debug)]
struct Node {
    op: Op,
    // `None` only for parameter leaves, whose value lives in the ParamSet.
    value: Option<Tensor>,
    needs_grad: bool,
}

/// Gradients of one backward pass, keyed by parameter.
#[derive(Debug, Clone, Default)]
pub struct Gradients {
    entries: Vec<(ParamId, Tensor)>,
}

impl Gradients {
    pub fn get(&self, id: ParamId) -> Option<&Tensor> {
        self.entries.iter().find(|(p, _)| *p == id).map(|(_, t)| t)
    }

    pub fn iter(&self) -> impl Iterator<Item = (ParamId, &Tensor)> {
        self.entries.iter().map(|(p, t)| (*p, t))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// A tape of operations over values borrowed from a [`ParamSet`].
///
/// Nodes are appended in evaluation order, so the tape is already a
/// topological order and backward is a single reverse sweep.
pub struct Graph<'p> {
    params: &'p ParamSet,
    nodes: Vec<Node>,
    param_nodes: Vec<Option<Var>>,
    clamped_logs: usize,
}

impl<'p> Graph<'p> {
    pub fn new(params: &'p ParamSet) -> Self {
        Graph {
            params,
            nodes: Vec::with_capacity(256),
            param_nodes: vec![None; params.len()],
            clamped_logs: 0,
        }
    }

    pub fn params(&self) -> &'p ParamSet {
        self.params
    }

    /// Number of log evaluations whose argument fell below the floor.
    pub fn clamped_logs(&self) -> usize {
        self.clamped_logs
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn value(&self, v: Var) -> &Tensor {
        let node = &self.nodes[v.0];
        match (&node.value, &node.op) {
            (Some(t), _) => t,
            (None, Op::Param(id)) => self.params.value(*id),
            _ => unreachable!("node without value"),
        }
    }

    fn push(&mut self, op: Op, value: Tensor, inputs: &[Var]) -> Var {
        let needs_grad = inputs.iter().any(|v| self.nodes[v.0].needs_grad);
        self.nodes.push(Node {
            op,
            value: Some(value),
            needs_grad,
        });
        Var(self.nodes.len() - 1)
    }

    pub fn constant(&mut self, value: Tensor) -> Var {
        self.nodes.push(Node {
            op: Op::Constant,
            value: Some(value),
            needs_grad: false,
        });
        Var(self.nodes.len() - 1)
    }

    /// Leaf for a parameter. Repeated calls return the same node.
    pub fn param(&mut self, id: ParamId) -> Var {
        if let Some(v) = self.param_nodes[id.0] {
            return v;
        }
        self.nodes.push(Node {
            op: Op::Param(id),
            value: None,
            needs_grad: self.params.get(id).requires_grad,
        });
        let v = Var(self.nodes.len() - 1);
        self.param_nodes[id.0] = Some(v);
        v
    }

    pub fn matmul(&mut self, a: Var, b: Var) -> Result<Var, TensorError> {
        let (ta, tb) = (self.value(a), self.value(b));
        let (m, k) = ta.matrix_dims();
        let (k2, n) = tb.matrix_dims();
        if k != k2 {
            return Err(shape_err("matmul", ta, tb));
        }
        let mut out = vec![0.0; m * n];
        matmul_into(ta.data(), tb.data(), &mut out, m, k, n);
        let value = Tensor::from_vec(&[m, n], out)?;
        Ok(self.push(Op::MatMul(a, b), value, &[a, b]))
    }

    pub fn add(&mut self, a: Var, b: Var) -> Result<Var, TensorError> {
        let (ta, tb) = (self.value(a), self.value(b));
        let (m, n) = ta.matrix_dims();
        let (mb, nb) = tb.matrix_dims();
        if nb != n || (mb != m && mb != 1) {
            return Err(shape_err("add", ta, tb));
        }
        let mut out = ta.data().to_vec();
        if mb == m {
            for (o, x) in out.iter_mut().zip(tb.data()) {
                *o += x;
            }
        } else {
            for row in out.chunks_mut(n.max(1)) {
                for (o, x) in row.iter_mut().zip(tb.data()) {
                    *o += x;
                }
            }
        }
        let value = Tensor::from_vec(ta.shape(), out)?;
        Ok(self.push(Op::Add(a, b), value, &[a, b]))
    }

    pub fn sub(&mut self, a: Var, b: Var) -> Result<Var, TensorError> {
        let value = self.zip_same("sub", a, b, |x, y| x - y)?;
        Ok(self.push(Op::Sub(a, b), value, &[a, b]))
    }

    pub fn mul(&mut self, a: Var, b: Var) -> Result<Var, TensorError> {
        let value = self.zip_same("mul", a, b, |x, y| x * y)?;
        Ok(self.push(Op::Mul(a, b), value, &[a, b]))
    }

    pub fn scale(&mut self, a: Var, factor: f64) -> Var {
        let value = self.map(a, |x| x * factor);
        self.push(Op::Scale(a, factor), value, &[a])
    }

    pub fn concat_cols(&mut self, parts: &[Var]) -> Result<Var, TensorError> {
        let first = parts
            .first()
            .ok_or_else(|| TensorError::invalid("concat_cols", "no inputs"))?;
        let rows = self.value(*first).rows();
        let mut widths = Vec::with_capacity(parts.len());
        for p in parts {
            let t = self.value(*p);
            if t.rows() != rows {
                return Err(shape_err("concat_cols", self.value(*first), t));
            }
            widths.push(t.cols());
        }
        let total: usize = widths.iter().sum();
        let mut out = Vec::with_capacity(rows * total);
        for r in 0..rows {
            for p in parts {
                out.extend_from_slice(self.value(*p).row(r));
            }
        }
        let value = Tensor::from_vec(&[rows, total], out)?;
        Ok(self.push(Op::ConcatCols(parts.to_vec()), value, parts))
    }

    /// Columns `start..end` of a matrix.
    pub fn slice_cols(&mut self, a: Var, start: usize, end: usize) -> Result<Var, TensorError> {
        let t = self.value(a);
        let (rows, cols) = t.matrix_dims();
        if start >= end || end > cols {
            return Err(TensorError::invalid(
                "slice_cols",
                format!(
                    "range {start}..{end} out of bounds for shape {:?}",
                    t.shape()
                ),
            ));
        }
        let width = end - start;
        let mut out = Vec::with_capacity(rows * width);
        for r in 0..rows {
            out.extend_from_slice(&t.row(r)[start..end]);
        }
        let value = Tensor::from_vec(&[rows, width], out)?;
        Ok(self.push(Op::SliceCols(a, start), value, &[a]))
    }

    pub fn sigmoid(&mut self, a: Var) -> Var {
        let value = self.map(a, sigmoid);
        self.push(Op::Sigmoid(a), value, &[a])
    }

    pub fn tanh(&mut self, a: Var) -> Var {
        let value = self.map(a, f64::tanh);
        self.push(Op::Tanh(a), value, &[a])
    }

    pub fn relu(&mut self, a: Var) -> Var {
        let value = self.map(a, |x| x.max(0.0));
        self.push(Op::Relu(a), value, &[a])
    }

    /// Row-wise softmax with max subtraction.
    pub fn softmax_rows(&mut self, a: Var) -> Var {
        let t = self.value(a);
        let mut out = t.data().to_vec();
        let cols = t.cols().max(1);
        for row in out.chunks_mut(cols) {
            softmax_in_place(row);
        }
        let value = Tensor::from_vec(t.shape(), out).expect("same shape");
        self.push(Op::SoftmaxRows(a), value, &[a])
    }

    /// `ln(max(x, floor))`; arguments below the floor get zero gradient and
    /// are counted in [`Graph::clamped_logs`].
    pub fn log(&mut self, a: Var, floor: f64) -> Var {
        let t = self.value(a);
        let clamped = t
            .data()
            .iter()
            .filter(|&&x| x < floor || x.is_nan())
            .count();
        let value = self.map(a, |x| x.max(floor).ln());
        self.clamped_logs += clamped;
        self.push(Op::Log { input: a, floor }, value, &[a])
    }

    pub fn abs(&mut self, a: Var) -> Var {
        let value = self.map(a, f64::abs);
        self.push(Op::Abs(a), value, &[a])
    }

    /// Clamps into `[lo, hi]`. The gradient passes through on the closed
    /// interval and is zero outside it.
    pub fn clip(&mut self, a: Var, lo: f64, hi: f64) -> Var {
        let value = self.map(a, |x| x.clamp(lo, hi));
        self.push(Op::Clip { input: a, lo, hi }, value, &[a])
    }

    pub fn sum(&mut self, a: Var) -> Var {
        let s = self.value(a).data().iter().sum();
        self.push(Op::Sum(a), Tensor::scalar(s), &[a])
    }

    pub fn mean(&mut self, a: Var) -> Var {
        let n = self.value(a).len().max(1) as f64;
        let s = self.sum(a);
        self.scale(s, 1.0 / n)
    }

    /// Selects rows of `table` (index-select along the first axis).
    pub fn gather_rows(&mut self, table: Var, indices: &[usize]) -> Result<Var, TensorError> {
        let t = self.value(table);
        let (rows, cols) = t.matrix_dims();
        if let Some(&bad) = indices.iter().find(|&&i| i >= rows) {
            return Err(TensorError::invalid(
                "gather_rows",
                format!("index {bad} out of range for shape {:?}", t.shape()),
            ));
        }
        let mut out = Vec::with_capacity(indices.len() * cols);
        for &i in indices {
            out.extend_from_slice(t.row(i));
        }
        let value = Tensor::from_vec(&[indices.len(), cols], out)?;
        Ok(self.push(
            Op::GatherRows {
                table,
                indices: indices.to_vec(),
            },
            value,
            &[table],
        ))
    }

    /// Picks one column per row: `out[r] = a[r, indices[r]]`.
    pub fn pick(&mut self, a: Var, indices: &[usize]) -> Result<Var, TensorError> {
        let t = self.value(a);
        let (rows, cols) = t.matrix_dims();
        if indices.len() != rows {
            return Err(TensorError::invalid(
                "pick",
                format!("{} indices for shape {:?}", indices.len(), t.shape()),
            ));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= cols) {
            return Err(TensorError::invalid(
                "pick",
                format!("index {bad} out of range for shape {:?}", t.shape()),
            ));
        }
        let out = indices
            .iter()
            .enumerate()
            .map(|(r, &c)| t.data()[r * cols + c])
            .collect();
        let value = Tensor::from_vec(&[rows], out)?;
        Ok(self.push(
            Op::Pick {
                input: a,
                indices: indices.to_vec(),
            },
            value,
            &[a],
        ))
    }

    fn map(&self, a: Var, f: impl Fn(f64) -> f64) -> Tensor {
        let t = self.value(a);
        let data = t.data().iter().map(|&x| f(x)).collect();
        Tensor::from_vec(t.shape(), data).expect("same shape")
    }

    fn zip_same(
        &self,
        op: &'static str,
        a: Var,
        b: Var,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<Tensor, TensorError> {
        let (ta, tb) = (self.value(a), self.value(b));
        if ta.matrix_dims() != tb.matrix_dims() {
            return Err(shape_err(op, ta, tb));
        }
        let data = ta
            .data()
            .iter()
            .zip(tb.data())
            .map(|(&x, &y)| f(x, y))
            .collect();
        Tensor::from_vec(ta.shape(), data)
    }

    /// Reverse sweep from a single-element node.
    pub fn backward(&self, root: Var) -> Result<Gradients, TensorError> {
        let root_value = self.value(root);
        if root_value.len() != 1 {
            return Err(TensorError::invalid(
                "backward",
                format!(
                    "root must hold one value, has shape {:?}",
                    root_value.shape()
                ),
            ));
        }
        let mut grads: Vec<Option<Tensor>> = Vec::new();
        grads.resize_with(root.0 + 1, || None);
        let mut seed = Tensor::zeros(root_value.shape());
        seed.fill(1.0);
        grads[root.0] = Some(seed);
        let mut out = Gradients::default();

        for idx in (0..=root.0).rev() {
            let node = &self.nodes[idx];
            if !node.needs_grad {
                continue;
            }
            let Some(g) = grads[idx].take() else { continue };
            match &node.op {
                Op::Constant => {}
                Op::Param(id) => out.entries.push((*id, g)),
                Op::MatMul(a, b) => {
                    let (ta, tb) = (self.value(*a), self.value(*b));
                    let (m, k) = ta.matrix_dims();
                    let n = tb.cols();
                    if self.needs(*a) {
                        // dA = dC · Bᵀ
                        let mut da = vec![0.0; m * k];
                        for i in 0..m {
                            let grow = &g.data()[i * n..(i + 1) * n];
                            for kk in 0..k {
                                let brow = &tb.data()[kk * n..(kk + 1) * n];
                                da[i * k + kk] = dot(grow, brow);
                            }
                        }
                        self.acc(&mut grads, *a, da);
                    }
                    if self.needs(*b) {
                        // dB = Aᵀ · dC
                        let mut db = vec![0.0; k * n];
                        for i in 0..m {
                            let grow = &g.data()[i * n..(i + 1) * n];
                            for kk in 0..k {
                                let aik = ta.data()[i * k + kk];
                                if aik == 0.0 {
                                    continue;
                                }
                                let drow = &mut db[kk * n..(kk + 1) * n];
                                for (d, gv) in drow.iter_mut().zip(grow) {
                                    *d += aik * gv;
                                }
                            }
                        }
                        self.acc(&mut grads, *b, db);
                    }
                }
                Op::Add(a, b) => {
                    if self.needs(*a) {
                        self.acc(&mut grads, *a, g.data().to_vec());
                    }
                    if self.needs(*b) {
                        let tb = self.value(*b);
                        if tb.len() == g.len() {
                            self.acc(&mut grads, *b, g.data().to_vec());
                        } else {
                            let n = tb.len();
                            let mut db = vec![0.0; n];
                            for row in g.data().chunks(n.max(1)) {
                                for (d, x) in db.iter_mut().zip(row) {
                                    *d += x;
                                }
                            }
                            self.acc(&mut grads, *b, db);
                        }
                    }
                }
                Op::Sub(a, b) => {
                    if self.needs(*a) {
                        self.acc(&mut grads, *a, g.data().to_vec());
                    }
                    if self.needs(*b) {
                        self.acc(&mut grads, *b, g.data().iter().map(|x| -x).collect());
                    }
                }
                Op::Mul(a, b) => {
                    let (ta, tb) = (self.value(*a), self.value(*b));
                    if self.needs(*a) {
                        self.acc(&mut grads, *a, zip(g.data(), tb.data(), |x, y| x * y));
                    }
                    if self.needs(*b) {
                        self.acc(&mut grads, *b, zip(g.data(), ta.data(), |x, y| x * y));
                    }
                }
                Op::Scale(a, f) => {
                    self.acc(&mut grads, *a, g.data().iter().map(|x| x * f).collect());
                }
                Op::ConcatCols(parts) => {
                    let rows = g.rows();
                    let total = g.cols();
                    let mut offset = 0;
                    for p in parts {
                        let w = self.value(*p).cols();
                        if self.needs(*p) {
                            let mut dp = Vec::with_capacity(rows * w);
                            for r in 0..rows {
                                let base = r * total + offset;
                                dp.extend_from_slice(&g.data()[base..base + w]);
                            }
                            self.acc(&mut grads, *p, dp);
                        }
                        offset += w;
                    }
                }
                Op::SliceCols(a, start) => {
                    let ta = self.value(*a);
                    let (rows, cols) = ta.matrix_dims();
                    let w = g.cols();
                    let mut da = vec![0.0; rows * cols];
                    for r in 0..rows {
                        let dst = r * cols + start;
                        da[dst..dst + w].copy_from_slice(&g.data()[r * w..(r + 1) * w]);
                    }
                    self.acc(&mut grads, *a, da);
                }
                Op::Sigmoid(a) => {
                    let y = node.value.as_ref().expect("value");
                    self.acc(
                        &mut grads,
                        *a,
                        zip(g.data(), y.data(), |d, s| d * s * (1.0 - s)),
                    );
                }
                Op::Tanh(a) => {
                    let y = node.value.as_ref().expect("value");
                    self.acc(
                        &mut grads,
                        *a,
                        zip(g.data(), y.data(), |d, t| d * (1.0 - t * t)),
                    );
                }
                Op::Relu(a) => {
                    let x = self.value(*a);
                    self.acc(
                        &mut grads,
                        *a,
                        zip(g.data(), x.data(), |d, x| if x > 0.0 { d } else { 0.0 }),
                    );
                }
                Op::SoftmaxRows(a) => {
                    let y = node.value.as_ref().expect("value");
                    let cols = y.cols().max(1);
                    let mut da = Vec::with_capacity(y.len());
                    for (yr, gr) in y.data().chunks(cols).zip(g.data().chunks(cols)) {
                        let inner = dot(yr, gr);
                        da.extend(yr.iter().zip(gr).map(|(s, d)| s * (d - inner)));
                    }
                    self.acc(&mut grads, *a, da);
                }
                Op::Log { input, floor } => {
                    let x = self.value(*input);
                    let floor = *floor;
                    self.acc(
                        &mut grads,
                        *input,
                        zip(
                            g.data(),
                            x.data(),
                            |d, x| if x >= floor { d / x } else { 0.0 },
                        ),
                    );
                }
                Op::Abs(a) => {
                    let x = self.value(*a);
                    self.acc(
                        &mut grads,
                        *a,
                        zip(g.data(), x.data(), |d, x| {
                            if x > 0.0 {
                                d
                            } else if x < 0.0 {
                                -d
                            } else {
                                0.0
                            }
                        }),
                    );
                }
                Op::Clip { input, lo, hi } => {
                    let x = self.value(*input);
                    let (lo, hi) = (*lo, *hi);
                    self.acc(
                        &mut grads,
                        *input,
                        zip(
                            g.data(),
                            x.data(),
                            |d, x| if x >= lo && x <= hi { d } else { 0.0 },
                        ),
                    );
                }
                Op::Sum(a) => {
                    let n = self.value(*a).len();
                    self.acc(&mut grads, *a, vec![g.item(); n]);
                }
                Op::GatherRows { table, indices } => {
                    let t = self.value(*table);
                    let cols = t.cols();
                    let mut dt = vec![0.0; t.len()];
                    for (r, &i) in indices.iter().enumerate() {
                        let src = &g.data()[r * cols..(r + 1) * cols];
                        for (d, s) in dt[i * cols..(i + 1) * cols].iter_mut().zip(src) {
                            *d += s;
                        }
                    }
                    self.acc(&mut grads, *table, dt);
                }
                Op::Pick { input, indices } => {
                    let t = self.value(*input);
                    let cols = t.cols();
                    let mut da = vec![0.0; t.len()];
                    for (r, &c) in indices.iter().enumerate() {
                        da[r * cols + c] = g.data()[r];
                    }
                    self.acc(&mut grads, *input, da);
                }
            }
        }
        Ok(out)
    }

    fn needs(&self, v: Var) -> bool {
        self.nodes[v.0].needs_grad
    }

    fn acc(&self, grads: &mut [Option<Tensor>], v: Var, delta: Vec<f64>) {
        if !self.needs(v) {
            return;
        }
        match &mut grads[v.0] {
            Some(t) => {
                for (a, d) in t.data_mut().iter_mut().zip(&delta) {
                    *a += d;
                }
            }
            slot @ None => {
                let shape = self.value(v).shape().to_vec();
                *slot = Some(Tensor::from_vec(&shape, delta).expect("gradient shape"));
            }
        }
    }
}

pub(crate) fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

pub(crate) fn softmax_in_place(row: &mut [f64]) {
    let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut total = 0.0;
    for v in row.iter_mut() {
        *v = (*v - max).exp();
        total += *v;
    }
    for v in row.iter_mut() {
        *v /= total;
    }
}

pub(crate) fn matmul_into(a: &[f64], b: &[f64], out: &mut [f64], m: usize, k: usize, n: usize) {
    for i in 0..m {
        let orow = &mut out[i * n..(i + 1) * n];
        for kk in 0..k {
            let aik = a[i * k + kk];
            if aik == 0.0 {
                continue;
            }
            let brow = &b[kk * n..(kk + 1) * n];
            for (o, bv) in orow.iter_mut().zip(brow) {
                *o += aik * bv;
            }
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn zip(a: &[f64], b: &[f64], f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect()
}

fn shape_err(op: &'static str, a: &Tensor, b: &Tensor) -> TensorError {
    TensorError::ShapeMismatch {
        op,
        lhs: a.shape().to_vec(),
        rhs: b.shape().to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_derivative() {
        let mut ps = ParamSet::new();
        let w = ps.add("w", Tensor::scalar(3.0), true);
        let mut g = Graph::new(&ps);
        let x = g.param(w);
        let sq = g.mul(x, x).unwrap();
        let loss = g.sum(sq);
        let grads = g.backward(loss).unwrap();
        assert_eq!(grads.get(w).unwrap().item(), 6.0);
    }

    #[test]
    fn softmax_sum_has_zero_gradient() {
        let mut ps = ParamSet::new();
        let v = ps.add(
            "v",
            Tensor::from_vec(&[4], vec![0.3, -1.2, 2.0, 0.7]).unwrap(),
            true,
        );
        let mut g = Graph::new(&ps);
        let x = g.param(v);
        let s = g.softmax_rows(x);
        assert!((g.value(s).data().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let loss = g.sum(s);
        let grads = g.backward(loss).unwrap();
        for d in grads.get(v).unwrap().data() {
            assert!(d.abs() < 1e-15, "{d}");
        }
    }

    #[test]
    fn shape_errors_name_the_op() {
        let ps = ParamSet::new();
        let mut g = Graph::new(&ps);
        let a = g.constant(Tensor::zeros(&[2, 3]));
        let b = g.constant(Tensor::zeros(&[2, 3]));
        let err = g.matmul(a, b).unwrap_err();
        assert_eq!(
            err,
            TensorError::ShapeMismatch {
                op: "matmul",
                lhs: vec![2, 3],
                rhs: vec![2, 3]
            }
        );
        assert!(err.to_string().contains("matmul"));
        let c = g.constant(Tensor::zeros(&[3, 2]));
        assert!(g.mul(a, c).is_err());
        assert!(g.add(a, c).is_err());
    }

    #[test]
    fn broadcast_add_sums_bias_gradient() {
        let mut ps = ParamSet::new();
        let bias = ps.add(
            "b",
            Tensor::from_vec(&[1, 2], vec![1.0, 2.0]).unwrap(),
            true,
        );
        let mut g = Graph::new(&ps);
        let x = g.constant(Tensor::zeros(&[3, 2]));
        let b = g.param(bias);
        let y = g.add(x, b).unwrap();
        assert_eq!(g.value(y).row(2), &[1.0, 2.0]);
        let loss = g.sum(y);
        let grads = g.backward(loss).unwrap();
        assert_eq!(grads.get(bias).unwrap().data(), &[3.0, 3.0]);
    }

    #[test]
    fn log_floor_counts_clamps() {
        let ps = ParamSet::new();
        let mut g = Graph::new(&ps);
        let x = g.constant(Tensor::from_vec(&[2], vec![0.0, 0.5]).unwrap());
        let y = g.log(x, 1e-12);
        assert_eq!(g.clamped_logs(), 1);
        assert!((g.value(y).data()[0] - 1e-12f64.ln()).abs() < 1e-12);
    }
}
