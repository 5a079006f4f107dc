use perhom::complexes::{cone, find_null_homotopy, hom_space_dims, tensor_complex, BoundedComplex, ChainMap};
use perhom::doc::{parse, serialize, Document};
use perhom::exactla::{kernel_basis, rank, solve_linear, Field, Matrix};
use perhom::gralg::compress_modules;
use perhom::koszul::{bgg_complex, bgg_periodic};
use perhom::periodic::{compress, expand_window, periodic_hom_dims, shift_periodic};
use perhom::random::{random_chain_map, random_complex, random_module_complex};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn field_of(pick: u8) -> Field {
    match pick % 3 {
        0 => Field::Rationals,
        1 => Field::fp(2).unwrap(),
        _ => Field::fp(5).unwrap(),
    }
}

fn int_matrix() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| (Just(r), Just(c), proptest::collection::vec(-3i64..=3, r * c)))
}

/// Gaussian elimination over F_p on plain integers, kept apart from the
/// library's solver.
fn rank_mod_p(rows: usize, cols: usize, data: &[i64], p: i64) -> usize {
    let mut a: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| data[i * cols + j].rem_euclid(p)).collect()).collect();
    let inv = |x: i64| (1..p).find(|y| x * y % p == 1).unwrap();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, piv);
        let s = inv(a[r][c]);
        for v in a[r].iter_mut() {
            *v = *v * s % p;
        }
        let pivot = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (v, w) in row.iter_mut().zip(&pivot) {
                    *v = (*v - f * w).rem_euclid(p);
                }
            }
        }
        r += 1;
    }
    r
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn h(x: &BoundedComplex, i: i64) -> usize {
    x.cohomology_dims().unwrap().into_iter().find(|&(d, _)| d == i).map_or(0, |(_, v)| v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_matches_transpose_and_nullity((r, c, data) in int_matrix(), pick in any::<u8>()) {
        let m = Matrix::from_ints(field_of(pick), r, c, &data);
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
        let k = kernel_basis(&m);
        prop_assert_eq!(rank(&m) + k.cols(), c);
        prop_assert!((&m * &k).is_zero());
    }

    #[test]
    fn rank_agrees_with_plain_elimination((r, c, data) in int_matrix()) {
        for p in [2, 3, 5, 7] {
            let m = Matrix::from_ints(Field::fp(p as u64).unwrap(), r, c, &data);
            prop_assert_eq!(rank(&m), rank_mod_p(r, c, &data, p));
        }
        // Reduction mod p can only lose rank.
        let q = rank(&Matrix::from_ints(Field::Rationals, r, c, &data));
        prop_assert!(rank_mod_p(r, c, &data, 7) <= q);
    }

    #[test]
    fn solve_recovers_consistent_systems((r, c, data) in int_matrix(), x in proptest::collection::vec(-4i64..=4, 5), pick in any::<u8>()) {
        let field = field_of(pick);
        let a = Matrix::from_ints(field, r, c, &data);
        let x = Matrix::from_ints(field, c, 1, &x[..c]);
        let b = &a * &x;
        let y = solve_linear(&a, &b).unwrap().expect("system is consistent");
        prop_assert_eq!(&a * &y, b);
    }

    #[test]
    fn shift_moves_cohomology(seed in any::<u64>(), l in -3i64..=3, pick in any::<u8>()) {
        let x = random_complex(field_of(pick), 3, 4, &mut rng(seed));
        let y = x.shift(l);
        for i in x.lo() - 4..=x.hi() + 4 {
            prop_assert_eq!(h(&y, i - l), h(&x, i));
        }
    }

    #[test]
    fn cone_is_additive_on_euler_characteristic(seed in any::<u64>(), pick in any::<u8>()) {
        let mut g = rng(seed);
        let field = field_of(pick);
        let (x, y) = (random_complex(field, 3, 3, &mut g), random_complex(field, 3, 3, &mut g));
        let f = random_chain_map(&x, &y, &mut g).unwrap();
        let c = cone(&f).unwrap().complex;
        prop_assert!(c.validate().is_ok());
        prop_assert_eq!(c.euler_characteristic(), y.euler_characteristic() - x.euler_characteristic());
    }

    #[test]
    fn identity_cone_is_contractible(seed in any::<u64>(), pick in any::<u8>()) {
        let x = random_complex(field_of(pick), 3, 4, &mut rng(seed));
        let c = cone(&ChainMap::identity(&x)).unwrap().complex;
        prop_assert!(c.is_acyclic().unwrap());
        let h = find_null_homotopy(&ChainMap::identity(&c)).unwrap().expect("identity cone is contractible");
        prop_assert!(h.check_on(c.lo() - 1..=c.hi() + 1).is_ok());
    }

    #[test]
    fn hom_dimension_is_product_of_cohomology(seed in any::<u64>(), pick in any::<u8>()) {
        let mut g = rng(seed);
        let field = field_of(pick);
        let (x, y) = (random_complex(field, 3, 3, &mut g), random_complex(field, 3, 3, &mut g));
        let expected: usize = (x.lo().min(y.lo())..=x.hi().max(y.hi())).map(|i| h(&x, i) * h(&y, i)).sum();
        prop_assert_eq!(hom_space_dims(&x, &y).unwrap().hom, expected);
    }

    #[test]
    fn compression_folds_cohomology(seed in any::<u64>(), n in 1usize..=3, pick in any::<u8>()) {
        let x = random_complex(field_of(pick), 4, 5, &mut rng(seed));
        let p = compress(&x, n).unwrap();
        prop_assert!(p.validate().is_ok());
        let hp = p.cohomology().unwrap();
        for (r, &dim) in hp.iter().enumerate() {
            let folded: usize = x.degrees().filter(|j| j.rem_euclid(n as i64) == r as i64).map(|j| h(&x, j)).sum();
            prop_assert_eq!(dim, folded);
        }
        let window = expand_window(&p, x.lo(), x.hi() + 1).unwrap();
        prop_assert!(window.validate().is_ok());
        prop_assert_eq!(shift_periodic(&p, n as i64), p.shift(n as i64));
    }

    #[test]
    fn periodic_hom_is_product_of_periodic_cohomology(seed in any::<u64>(), n in 1usize..=3) {
        let mut g = rng(seed);
        let field = Field::fp(5).unwrap();
        let (x, y) = (random_complex(field, 3, 3, &mut g), random_complex(field, 3, 3, &mut g));
        let (px, py) = (compress(&x, n).unwrap(), compress(&y, n).unwrap());
        let (hx, hy) = (px.cohomology().unwrap(), py.cohomology().unwrap());
        let expected: usize = hx.iter().zip(&hy).map(|(a, b)| a * b).sum();
        prop_assert_eq!(periodic_hom_dims(&px, &py).unwrap().hom, expected);
    }

    #[test]
    fn tensor_cohomology_is_kunneth(seed in any::<u64>(), pick in any::<u8>()) {
        let mut g = rng(seed);
        let field = field_of(pick);
        let (x, y) = (random_complex(field, 3, 3, &mut g), random_complex(field, 3, 3, &mut g));
        let t = tensor_complex(&x, &y).unwrap();
        prop_assert!(t.validate().is_ok());
        for k in t.degrees() {
            let expected: usize = x.degrees().map(|i| h(&x, i) * h(&y, k - i)).sum();
            prop_assert_eq!(h(&t, k), expected);
        }
    }

    #[test]
    fn documents_round_trip(seed in any::<u64>(), n in 1usize..=3, pick in any::<u8>()) {
        let x = random_complex(field_of(pick), 4, 4, &mut rng(seed));
        let p = compress(&x, n).unwrap();
        for doc in [Document::Complex(x), Document::Periodic(p)] {
            let text = serialize(&doc);
            let back = parse(&text).unwrap();
            prop_assert_eq!(serialize(&back), text);
            prop_assert_eq!(back, doc);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn bgg_constructions_are_complexes(seed in any::<u64>(), c in 1usize..=2, n in 1usize..=3) {
        let field = Field::fp(5).unwrap();
        let mc = random_module_complex(field, c, 4, &mut rng(seed)).unwrap();
        let phi = bgg_complex(&mc).unwrap();
        prop_assert!(phi.complex.validate().is_ok());
        let periodic = bgg_periodic(&compress_modules(&mc, n).unwrap()).unwrap();
        prop_assert!(periodic.validate().is_ok());
        let folded = compress(&phi.complex, n).unwrap();
        prop_assert_eq!(periodic.dims(), folded.dims());
    }
}
