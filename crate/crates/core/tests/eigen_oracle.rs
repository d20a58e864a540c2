//! Cross-checks of the eigensolver against computations that share none of
//! its code: characteristic polynomial roots found by bisection, closed-form
//! spectra of structured graphs, and eigenvalue inequalities.

use lapenergy::matrices::{MatrixKind, SymMatrix};
use lapenergy::spectral::sym_eigenvalues;
use lapenergy::verify::{char_poly_coeffs, real_poly_roots};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::SQRT_2;

fn solve_ascending(m: &DMatrix<f64>) -> Vec<f64> {
    let sym = SymMatrix::from_dense(MatrixKind::WeightedAdjacency, m.clone()).unwrap();
    let mut v = sym_eigenvalues(&sym).unwrap().values().to_vec();
    v.reverse();
    v
}

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize, int: bool) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = if int {
                rng.random_range(-9..=9) as f64
            } else {
                2.0 * rng.random::<f64>() - 1.0
            };
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

#[test]
fn char_poly_roots_match_eigenvalues_on_a_thousand_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(271828);
    let mut worst = 0f64;
    for _ in 0..1000 {
        let n = rng.random_range(2..=4);
        let m = random_symmetric(&mut rng, n, true);
        let solved = solve_ascending(&m);
        let roots = real_poly_roots(&char_poly_coeffs(&m));
        assert_eq!(roots.len(), n, "oracle must return a full spectrum");
        for (a, b) in solved.iter().zip(&roots) {
            worst = worst.max((a - b).abs());
        }
    }
    assert!(worst <= 1e-8, "largest deviation {worst}");
}

#[test]
fn weyl_inequalities_hold_under_addition() {
    let mut rng = ChaCha8Rng::seed_from_u64(314159);
    for _ in 0..300 {
        let n = rng.random_range(2..=20);
        let a = random_symmetric(&mut rng, n, false);
        let b = random_symmetric(&mut rng, n, false);
        let c = &a + &b;
        let (va, vb, vc) = (solve_ascending(&a), solve_ascending(&b), solve_ascending(&c));
        // ascending 0-indexed: vc[i+j-n+1] <= va[i] + vb[j] when i+j >= n-1,
        // and vc[i+j] >= va[i] + vb[j] when i+j <= n-1
        let tol = 1e-9 * (va[n - 1].abs().max(va[0].abs()) + vb[n - 1].abs().max(vb[0].abs()));
        for i in 0..n {
            for j in 0..n {
                if i + j + 1 >= n {
                    assert!(vc[i + j + 1 - n] <= va[i] + vb[j] + tol);
                }
                if i + j < n {
                    assert!(vc[i + j] >= va[i] + vb[j] - tol);
                }
            }
        }
    }
}

#[test]
fn closed_form_spectra_of_structured_graphs() {
    // complete graph on n vertices: adjacency {n-1, -1 x (n-1)},
    // Laplacian {n x (n-1), 0}, signless {2n-2, (n-2) x (n-1)}
    for n in [2usize, 3, 5, 17, 64] {
        let nf = n as f64;
        let mut a = DMatrix::from_element(n, n, 1.0);
        for i in 0..n {
            a[(i, i)] = 0.0;
        }
        let mut l = DMatrix::from_element(n, n, -1.0);
        let mut q = DMatrix::from_element(n, n, 1.0);
        for i in 0..n {
            l[(i, i)] = nf - 1.0;
            q[(i, i)] = nf - 1.0;
        }

        let got = solve_ascending(&a);
        let mut want = vec![-1.0; n];
        want[n - 1] = nf - 1.0;
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() <= 1e-10 * nf);
        }

        let got = solve_ascending(&l);
        let mut want = vec![nf; n];
        want[0] = 0.0;
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() <= 1e-10 * nf);
        }

        let got = solve_ascending(&q);
        let mut want = vec![nf - 2.0; n];
        want[n - 1] = 2.0 * nf - 2.0;
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() <= 1e-10 * nf);
        }
    }

    // path on 4 vertices: adjacency eigenvalues (+-1 +- sqrt(5))/2,
    // Laplacian eigenvalues 2 - 2cos(k pi / 4)
    let a = DMatrix::from_row_slice(
        4,
        4,
        &[0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0],
    );
    let phi = 5f64.sqrt();
    let got = solve_ascending(&a);
    let want = [-(1.0 + phi) / 2.0, (1.0 - phi) / 2.0, (phi - 1.0) / 2.0, (1.0 + phi) / 2.0];
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() <= 1e-12);
    }

    let l = DMatrix::from_row_slice(
        4,
        4,
        &[1.0, -1.0, 0.0, 0.0, -1.0, 2.0, -1.0, 0.0, 0.0, -1.0, 2.0, -1.0, 0.0, 0.0, -1.0, 1.0],
    );
    let got = solve_ascending(&l);
    let want = [0.0, 2.0 - SQRT_2, 2.0, 2.0 + SQRT_2];
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() <= 1e-12);
    }

    // star on 5 vertices: adjacency {-2, 0, 0, 0, 2}
    let mut star = DMatrix::zeros(5, 5);
    for leaf in 1..5 {
        star[(0, leaf)] = 1.0;
        star[(leaf, 0)] = 1.0;
    }
    let got = solve_ascending(&star);
    let want = [-2.0, 0.0, 0.0, 0.0, 2.0];
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() <= 1e-12);
    }
}

#[test]
fn oracle_handles_repeated_eigenvalues() {
    // diag(3, 3, 3) has a triple root; diag(2, 2, 5, 5) two doubles
    let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, 3.0, 3.0]));
    let roots = real_poly_roots(&char_poly_coeffs(&m));
    assert_eq!(roots.len(), 3);
    for r in &roots {
        assert!((r - 3.0).abs() <= 1e-8);
    }

    // a double root is located from evaluations of p, which vanish to
    // rounding noise in a band of width about sqrt(machine epsilon) around
    // the root; 1e-6 is the attainable accuracy there, not solver slack
    let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, 2.0, 5.0, 5.0]));
    let roots = real_poly_roots(&char_poly_coeffs(&m));
    assert_eq!(roots.len(), 4);
    for (r, want) in roots.iter().zip(&[2.0, 2.0, 5.0, 5.0]) {
        assert!((r - want).abs() <= 1e-6);
    }
}
