use davlab_core::group::{
    build, enumerate_p_groups, nilpotency_class, verify_presentation, Family, GroupDescriptor, GroupLaw, NormalForm,
    ORDER_CAP,
};
use davlab_core::jennings::{
    jennings_data, loewy_formula, mseries_closed_form_check, power_generators_check, quotient_checks, JenningsData,
};

fn class_two_grid(max_order: u64) -> Vec<GroupDescriptor> {
    [Family::G1, Family::G2, Family::G3]
        .into_iter()
        .flat_map(|f| [3, 5].into_iter().flat_map(move |p| enumerate_p_groups(f, p, max_order)))
        .collect()
}

fn two_group_grid(max_r: u32) -> Vec<GroupDescriptor> {
    [Family::Dihedral, Family::Dicyclic, Family::Semidihedral, Family::Modular2]
        .into_iter()
        .flat_map(|f| enumerate_p_groups(f, 2, 1 << max_r))
        .collect()
}

fn check_data(d: &GroupDescriptor, data: &JenningsData, order: usize) {
    let c = &data.coefficients;
    assert_eq!(c.iter().sum::<u64>(), order as u64, "{d}");
    assert!(c.iter().eq(c.iter().rev()), "{d}: not palindromic {c:?}");
    assert_eq!(c[0], 1, "{d}");
    assert_eq!(data.loewy_length, c.len() as u64, "{d}");
    let log: u32 = data.exponents.iter().sum();
    assert_eq!(data.prime.pow(log), order as u64, "{d}");
}

#[test]
fn two_group_families_match_formula() {
    for d in two_group_grid(6) {
        if d.to_string() == "d[4]" {
            assert!(loewy_formula(&d).is_err());
            continue;
        }
        let g = build(&d).unwrap();
        let data = jennings_data(&g, 2).unwrap();
        check_data(&d, &data, g.order());
        assert_eq!(Ok(data.loewy_length), loewy_formula(&d), "{d}");
    }
}

#[test]
fn class_two_grid_up_to_729() {
    let grid = class_two_grid(729);
    assert!(grid.len() >= 15);
    for d in &grid {
        let g = build(d).unwrap();
        let p = d.prime().unwrap();
        assert_eq!(nilpotency_class(&g), Some(2), "{d}");
        let data = jennings_data(&g, p).unwrap();
        check_data(d, &data, g.order());
        assert!(quotient_checks(&g, &data.series, p).iter().all(|q| q.normal && q.elementary_abelian));
        let ms = mseries_closed_form_check(&g, d).unwrap();
        assert!(ms.all_equal(), "{d}: {ms:?}");
        assert!(ms.d_agrees(), "{d}: {ms:?}");
        assert!(power_generators_check(&g, d).unwrap().all_equal(), "{d}");
        assert_eq!(Ok(data.loewy_length), loewy_formula(d), "{d}");
    }
}

#[test]
fn class_two_formula_up_to_cap() {
    for d in class_two_grid(ORDER_CAP as u64).into_iter().filter(|d| d.expected_order().unwrap() > 729) {
        let g = build(&d).unwrap();
        let data = jennings_data(&g, d.prime().unwrap()).unwrap();
        assert_eq!(Ok(data.loewy_length), loewy_formula(&d), "{d}");
    }
}

#[test]
fn g4_table_free() {
    let d: GroupDescriptor = "g4[3,4,2,2,1,0]".parse().unwrap();
    assert!(build(&d).is_err());
    let g = NormalForm::new(&d).unwrap();
    assert!(verify_presentation(&g, &d).unwrap().all_hold());
    let data = jennings_data(&g, 3).unwrap();
    check_data(&d, &data, g.order());
    assert!(quotient_checks(&g, &data.series, 3).iter().all(|q| q.normal && q.elementary_abelian));
    assert!(mseries_closed_form_check(&g, &d).unwrap().all_equal());
    assert!(power_generators_check(&g, &d).unwrap().all_equal());
}
