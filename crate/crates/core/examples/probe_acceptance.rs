// Scratch probes for pinning acceptance-test windows and thresholds.
use fracchain::chain::{ChainSpec, QuenchSpec};
use fracchain::correlators::{realspace_correlators, Region};
use fracchain::entanglement::{log_negativity, subsystem_entropy};
use fracchain::quasiparticle::{revival_time, QuasiparticleModel};
use fracchain::otoc::otoc_series;
use rayon::prelude::*;

fn static_negativity(l: usize, alpha: f64, m: f64, na: usize, nb: usize, nd: usize) -> f64 {
    let q = QuenchSpec::static_chain(ChainSpec::new(l, alpha, m).unwrap());
    let a = Region::block(1, na).unwrap();
    let b = Region::block(na + nd + 1, nb).unwrap();
    let cov = realspace_correlators(&q, 0.0, &a.union(&b).unwrap()).unwrap();
    log_negativity(&cov, &a, &b).unwrap().value
}

fn main() {
    let which = std::env::args().nth(1).unwrap_or_default();

    if which == "decay" {
        // Criterion 3 probe: E_LN vs n_d at L=200, blocks 20, m=1e-5.
        for &alpha in &[0.5, 1.0, 1.5, 2.0] {
            println!("# alpha = {alpha}");
            let vals: Vec<(usize, f64)> = (0..=80)
                .collect::<Vec<_>>()
                .par_iter()
                .map(|&nd| (nd, static_negativity(200, alpha, 1e-5, 20, 20, nd)))
                .collect();
            for (nd, e) in vals {
                println!("{nd} {e:.6e}");
            }
        }
    }

    if which == "slope13" {
        // alpha=2 critical power-law exponent probe at a few scales.
        for &(l, blocks) in &[(200usize, 20usize), (400, 40), (400, 50), (800, 80)] {
            let vals: Vec<(usize, f64)> = (1..=12)
                .collect::<Vec<_>>()
                .par_iter()
                .map(|&nd| (nd, static_negativity(l, 2.0, 1e-5, blocks, blocks, nd)))
                .collect();
            // ln-ln slopes between consecutive points
            print!("L={l} blocks={blocks}: ");
            for w in vals.windows(2) {
                let s = (w[1].1.ln() - w[0].1.ln()) / ((w[1].0 as f64).ln() - (w[0].0 as f64).ln());
                print!("{s:.3} ");
            }
            println!();
        }
    }

    if which == "saturation" {
        // Criterion 4 probe: E_LN vs ell at L=200, n_d=0.
        for &alpha in &[1.0, 1.5] {
            for &m in &[1e-5, 1.0] {
                let vals: Vec<(usize, f64)> = (1..=16)
                    .map(|i| i * 5)
                    .collect::<Vec<_>>()
                    .par_iter()
                    .map(|&ell| (ell, static_negativity(200, alpha, m, ell, ell, 0)))
                    .collect();
                println!("# alpha={alpha} m={m}");
                for (ell, e) in &vals {
                    println!("{ell} {e:.6e}");
                }
            }
        }
    }

    if which == "revival" {
        // Criterion 5 probe: quench negativity series, L=400, blocks 20, nd=4.
        for &alpha in &[1.6, 0.6] {
            let q = QuenchSpec::mass_quench(400, alpha, 4.0, 2.0).unwrap();
            let t_r = revival_time(&q).finite();
            println!("# alpha={alpha} t_R={t_r:?}");
            let t_max = match t_r {
                Some(t) => 1.25 * t,
                None => 600.0,
            };
            let n = 300;
            let a = Region::block(1, 20).unwrap();
            let b = Region::block(25, 20).unwrap();
            let union = a.union(&b).unwrap();
            let vals: Vec<(f64, f64)> = (0..=n)
                .collect::<Vec<_>>()
                .par_iter()
                .map(|&i| {
                    let t = t_max * i as f64 / n as f64;
                    let cov = realspace_correlators(&q, t, &union).unwrap();
                    (t, log_negativity(&cov, &a, &b).unwrap().value)
                })
                .collect();
            for (t, e) in vals {
                println!("{t:.2} {e:.6e}");
            }
        }
    }

    if which == "quasi" {
        // Criterion 6 probe: exact vs prediction, L=400, ell=20.
        for &alpha in &[1.1, 1.6] {
            let q = QuenchSpec::mass_quench(400, alpha, 4.0, 2.0).unwrap();
            let model = QuasiparticleModel::new(&q).unwrap();
            let v_max = q.post().max_velocity().value;
            let t_max = 400.0 / v_max;
            let region = Region::block(1, 20).unwrap();
            let n = 120;
            let rows: Vec<(f64, f64, f64)> = (0..=n)
                .collect::<Vec<_>>()
                .par_iter()
                .map(|&i| {
                    let t = t_max * i as f64 / n as f64;
                    let s = subsystem_entropy(&q, t, &region).unwrap().value;
                    (t, s, model.finite(t, 20))
                })
                .collect();
            let s_max = rows.iter().map(|r| r.1).fold(0.0, f64::max);
            let linf = rows.iter().map(|r| (r.1 - r.2).abs()).fold(0.0, f64::max);
            let s0 = rows[0].1;
            println!(
                "alpha={alpha}: S(0)={s0:.4} max|S-pred|={linf:.4} sup S={s_max:.4} rel={:.3}",
                linf / s_max
            );
        }
    }

    if which == "otoc" {
        // Criterion 8 probe: c(t) at L=256, which sep shows the revival?
        for &alpha in &[1.1, 0.6] {
            let q = QuenchSpec::mass_quench(256, alpha, 4.0, 2.0).unwrap();
            let t_r = revival_time(&q).finite();
            println!("# alpha={alpha} t_R={t_r:?}");
            let t_max = 2.0 * t_r.unwrap_or(256.0 / 2.0);
            let n = 2000;
            let times: Vec<f64> = (0..=n).map(|i| t_max * i as f64 / n as f64).collect();
            for &sep in &[8usize, 25] {
                let series = otoc_series(&q, sep, &times).unwrap();
                // Coarse envelope: max over 40 bins.
                let bins = 40;
                print!("sep={sep}: ");
                for b in 0..bins {
                    let lo = b * n / bins;
                    let hi = ((b + 1) * n / bins).min(n);
                    let m = series.values[lo..hi].iter().copied().fold(0.0, f64::max);
                    print!("{:.1e} ", m);
                }
                println!();
            }
        }
    }
}
