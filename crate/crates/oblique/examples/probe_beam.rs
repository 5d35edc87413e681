use oblique::exact::rat_parse;
use oblique::gram::*;
use oblique::spectra::Family;

fn main() {
    let t4pi = 4.0 * std::f64::consts::PI;
    for (a, n, t) in [("1/2", 4i64, t4pi), ("1/2", 8, t4pi), ("-13/5", 4, t4pi), ("-13/5", 8, t4pi)] {
        let fam = Family::Beam { a: rat_parse(a).unwrap() };
        let est = observability_constants(&fam, t, n).unwrap();
        println!("beam a={a} n={n} T={t:.2}: c_minus={:.4e} c_plus={:.4e} ratio={:.3e}", est.c_minus, est.c_plus, est.c_minus / est.c_plus);
    }
    println!("---- criterion 3 regime: T=1");
    for a in ["1/2", "1/3", "-13/5"] {
        for n in [30i64, 60] {
            let fam = Family::Schrodinger { a: rat_parse(a).unwrap() };
            let est = observability_constants(&fam, 1.0, n).unwrap();
            println!("schrod a={a} n={n}: c_minus={:.6e} c_plus={:.6e}", est.c_minus, est.c_plus);
        }
    }
    println!("---- integer slopes at N=8, T=1");
    for a in [-5i64, -3, -1, 1, 2, 5] {
        let fam = Family::Schrodinger { a: rat_parse(&a.to_string()).unwrap() };
        let est = observability_constants(&fam, 1.0, 8).unwrap();
        println!("schrod a={a}: ratio={:.3e}", est.c_minus.abs() / est.c_plus);
    }
}
