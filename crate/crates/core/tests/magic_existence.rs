use antimagic::magic::*;

#[test]
fn rectangle_existence_matches_search() {
    for a in 2..=8 {
        for b in 2..=16 / a {
            assert_eq!(search_mr(a, b).is_some(), mr_exists(a, b), "({a},{b})");
        }
    }
}

#[test]
fn rectangle_set_existence_matches_search() {
    for a in 2..=9 {
        for b in 2..=18 / a {
            for c in 1..=18 / (a * b) {
                let found = search_mrs(a, b, c);
                assert_eq!(found.is_some(), mrs_exists(a, b, c), "({a},{b};{c})");
                if let Some(grids) = found {
                    assert_eq!(grids.len(), c);
                }
            }
        }
    }
}

#[test]
fn small_cases() {
    assert!(!mr_exists(2, 2));
    assert!(mr_exists(2, 4));
    assert!(!mr_exists(2, 3));
    assert!(mr_exists(3, 5));
    assert!(mrs_exists(2, 4, 3));
    let s = construct_mrs(2, 4, 3).unwrap();
    assert_eq!((s.row_sum(), s.col_sum()), (50, 25));
    assert!(matches!(construct_mr(2, 2, 0), Err(antimagic::Error::InfeasibleParameters(_))));
}
