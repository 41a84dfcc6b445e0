//! Feed-forward policy/value network with hand-written backpropagation.

use rand::Rng;
use serde::{Deserialize, Serialize};

/// Kinds, argument heads, and which heads each kind uses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionLayout {
    pub kinds: usize,
    pub heads: Vec<usize>,
    pub head_names: Vec<String>,
    pub active: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetShape {
    pub input: usize,
    pub hidden: usize,
    pub core: usize,
    pub embed: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Dense {
    w: usize,
    b: usize,
    inp: usize,
    out: usize,
}

impl Dense {
    fn forward(&self, p: &[f64], x: &[f64], y: &mut Vec<f64>) {
        y.clear();
        for o in 0..self.out {
            let row = &p[self.w + o * self.inp..self.w + (o + 1) * self.inp];
            let s: f64 = row.iter().zip(x).map(|(a, b)| a * b).sum();
            y.push(s + p[self.b + o]);
        }
    }

    /// Accumulates parameter gradients; returns dL/dx when `want_dx`.
    fn backward(&self, p: &[f64], g: &mut [f64], x: &[f64], dy: &[f64], want_dx: bool) -> Vec<f64> {
        let mut dx = if want_dx { vec![0.0; self.inp] } else { Vec::new() };
        for (o, &d) in dy.iter().enumerate() {
            if d == 0.0 {
                continue;
            }
            g[self.b + o] += d;
            let base = self.w + o * self.inp;
            for i in 0..self.inp {
                g[base + i] += d * x[i];
            }
            if want_dx {
                for i in 0..self.inp {
                    dx[i] += d * p[base + i];
                }
            }
        }
        dx
    }
}

/// Parameter offsets of every layer inside the flat vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolicyNet {
    pub layout: ActionLayout,
    pub shape: NetShape,
    enc1: Dense,
    enc2: Dense,
    core: Dense,
    kind: Dense,
    embed: usize,
    args: Vec<Dense>,
    value: Dense,
    n_params: usize,
}

/// Activations kept for the backward pass.
#[derive(Debug, Clone, PartialEq)]
pub struct Trunk {
    pub x: Vec<f64>,
    pub h1: Vec<f64>,
    pub h2: Vec<f64>,
    pub z: Vec<f64>,
    pub kind_logits: Vec<f64>,
    pub value: f64,
}

impl PolicyNet {
    pub fn new(layout: ActionLayout, shape: NetShape) -> Self {
        let mut off = 0;
        let mut dense = |inp: usize, out: usize| {
            let d = Dense {
                w: off,
                b: off + inp * out,
                inp,
                out,
            };
            off += inp * out + out;
            d
        };
        let enc1 = dense(shape.input, shape.hidden);
        let enc2 = dense(shape.hidden, shape.hidden);
        let core = dense(shape.hidden, shape.core);
        let kind = dense(shape.core, layout.kinds);
        let args: Vec<Dense> = layout.heads.iter().map(|&n| dense(shape.core + shape.embed, n)).collect();
        let value = dense(shape.core, 1);
        let embed = off;
        off += layout.kinds * shape.embed;
        Self {
            layout,
            shape,
            enc1,
            enc2,
            core,
            kind,
            embed,
            args,
            value,
            n_params: off,
        }
    }

    pub fn num_params(&self) -> usize {
        self.n_params
    }

    /// Uniform fan-in init; policy heads start near zero so initial policies are near uniform.
    pub fn init_params<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut p = vec![0.0; self.n_params];
        let mut fill = |d: &Dense, scale: f64| {
            let bound = scale / (d.inp as f64).sqrt();
            for v in &mut p[d.w..d.b] {
                *v = rng.gen_range(-bound..bound);
            }
        };
        fill(&self.enc1, 1.0);
        fill(&self.enc2, 1.0);
        fill(&self.core, 1.0);
        fill(&self.kind, 0.01);
        for a in &self.args {
            fill(a, 0.01);
        }
        fill(&self.value, 0.1);
        for v in &mut p[self.embed..] {
            *v = rng.gen_range(-0.1..0.1);
        }
        p
    }

    pub fn trunk(&self, p: &[f64], x: &[f64]) -> Trunk {
        assert_eq!(x.len(), self.shape.input, "observation width mismatch");
        let relu = |v: &mut Vec<f64>| v.iter_mut().for_each(|a| *a = a.max(0.0));
        let mut h1 = Vec::new();
        self.enc1.forward(p, x, &mut h1);
        relu(&mut h1);
        let mut h2 = Vec::new();
        self.enc2.forward(p, &h1, &mut h2);
        relu(&mut h2);
        let mut z = Vec::new();
        self.core.forward(p, &h2, &mut z);
        relu(&mut z);
        let mut kind_logits = Vec::new();
        self.kind.forward(p, &z, &mut kind_logits);
        let mut v = Vec::new();
        self.value.forward(p, &z, &mut v);
        Trunk {
            x: x.to_vec(),
            h1,
            h2,
            z,
            kind_logits,
            value: v[0],
        }
    }

    fn arg_input(&self, p: &[f64], t: &Trunk, kind: usize) -> Vec<f64> {
        let e = self.shape.embed;
        let mut a = t.z.clone();
        a.extend_from_slice(&p[self.embed + kind * e..self.embed + (kind + 1) * e]);
        a
    }

    /// Logits of argument head `head` conditioned on `kind`.
    pub fn arg_logits(&self, p: &[f64], t: &Trunk, kind: usize, head: usize) -> Vec<f64> {
        let a = self.arg_input(p, t, kind);
        let mut y = Vec::new();
        self.args[head].forward(p, &a, &mut y);
        y
    }

    /// Backpropagates head-logit and value gradients into `g`.
    /// `d_args` pairs a head index with dL/dlogits for that head.
    #[allow(clippy::too_many_arguments)]
    pub fn backward(
        &self,
        p: &[f64],
        g: &mut [f64],
        t: &Trunk,
        kind: usize,
        d_kind: &[f64],
        d_args: &[(usize, Vec<f64>)],
        d_value: f64,
    ) {
        let mut dz = self.kind.backward(p, g, &t.z, d_kind, true);
        let dv = self.value.backward(p, g, &t.z, &[d_value], true);
        dz.iter_mut().zip(&dv).for_each(|(a, b)| *a += b);
        if !d_args.is_empty() {
            let a = self.arg_input(p, t, kind);
            let c = self.shape.core;
            let e = self.shape.embed;
            for (head, dl) in d_args {
                let da = self.args[*head].backward(p, g, &a, dl, true);
                dz.iter_mut().zip(&da[..c]).for_each(|(x, y)| *x += y);
                for j in 0..e {
                    g[self.embed + kind * e + j] += da[c + j];
                }
            }
        }
        let gate = |d: &mut Vec<f64>, act: &[f64]| d.iter_mut().zip(act).for_each(|(x, a)| if *a <= 0.0 { *x = 0.0 });
        gate(&mut dz, &t.z);
        let mut dh2 = self.core.backward(p, g, &t.h2, &dz, true);
        gate(&mut dh2, &t.h2);
        let mut dh1 = self.enc2.backward(p, g, &t.h1, &dh2, true);
        gate(&mut dh1, &t.h1);
        self.enc1.backward(p, g, &t.x, &dh1, false);
    }
}
