// finite-difference check of the three-point residual via the public search
// on an easier target, plus a tiny convergence trace
use nalgebra::DMatrix;
use q2core::factory::newton::PatternVars;
use q2core::graph::Graph;

fn residual_vec(vars: &PatternVars, g: &Graph, z: &[f64]) -> nalgebra::DVector<f64> {
    let n = g.n();
    let nv = vars.len() + 3;
    let a = vars.matrix(&z[..vars.len()]);
    let id = DMatrix::<f64>::identity(n, n);
    let p = (&a - &id * z[nv - 3]) * (&a - &id * z[nv - 2]) * (&a - &id * z[nv - 1]);
    let mut r = nalgebra::DVector::<f64>::zeros(n * (n + 1) / 2);
    for i in 0..n { for j in i..n { r[i * n - i * (i + 1) / 2 + j] = p[(i, j)]; } }
    r
}

fn main() {
    let gbar = Graph::path(4).disjoint_union(&Graph::empty(1));
    let g = gbar.complement();
    let vars = PatternVars::new(&g);
    let nv = vars.len() + 3;
    let mut z = vec![0.0f64; nv];
    for (k, v) in z.iter_mut().enumerate().take(vars.len()) { *v = 0.3 + 0.1 * (k as f64).sin(); }
    z[nv-3] = -1.1; z[nv-2] = 0.1; z[nv-1] = 1.2;
    // numeric jacobian column for a few vars vs the implementation's formula
    // (recreated here)
    let n = g.n();
    let a = vars.matrix(&z[..vars.len()]);
    let id = DMatrix::<f64>::identity(n, n);
    let b1 = &a - &id * z[nv-3];
    let b2 = &a - &id * z[nv-2];
    let b3 = &a - &id * z[nv-1];
    let b23 = &b2 * &b3;
    let b12 = &b1 * &b2;
    let m_rows = n*(n+1)/2;
    let mut max_err = 0.0f64;
    for k in 0..nv {
        let h = 1e-6;
        let mut zp = z.clone(); zp[k] += h;
        let mut zm = z.clone(); zm[k] -= h;
        let fd = (residual_vec(&vars, &g, &zp) - residual_vec(&vars, &g, &zm)) / (2.0*h);
        for i in 0..n { for j in i..n {
            let row = i*n - i*(i+1)/2 + j;
            let v = if k < vars.len() {
                let (pp, qq) = vars.positions()[k];
                let mut v = 0.0;
                if i == pp { v += b23[(qq, j)]; }
                if i == qq && pp != qq { v += b23[(pp, j)]; }
                if j == qq { v += b12[(i, pp)]; }
                if j == pp && pp != qq { v += b12[(i, qq)]; }
                v += b1[(i, pp)] * b3[(qq, j)];
                if pp != qq { v += b1[(i, qq)] * b3[(pp, j)]; }
                v
            } else if k == nv-3 { -(&b2*&b3)[(i,j)] }
            else if k == nv-2 { -(&b1*&b3)[(i,j)] }
            else { -(&b1*&b2)[(i,j)] };
            let err = (v - fd[row]).abs();
            if err > max_err { max_err = err; eprintln!("k={k} row=({i},{j}) analytic={v:.6} fd={:.6}", fd[row]); }
        }}
        let _ = m_rows;
    }
    println!("max jacobian err: {max_err:.3e}");
}
