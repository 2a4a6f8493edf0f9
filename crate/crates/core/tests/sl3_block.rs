use quadalg::invariants::is_central;
use quadalg::presets::{build_named, Preset, Sl3Block};
use quadalg::report::Status;
use quadalg::verify::{verify_all, verify_presentation, VerifyOptions};
use quadalg::{Field, GradedAlgebra, QuadraticPresentation};

#[test]
fn every_check_passes_over_q() {
    let r = verify_all(&Sl3Block, VerifyOptions::default()).unwrap();
    let failed: Vec<_> = r.failures().map(|c| c.check.clone()).collect();
    assert!(r.passed, "failed: {failed:?}");
    assert!(r.checks.iter().all(|c| c.status == Status::Pass));
}

#[test]
fn decomposition_is_formal_over_f7() {
    let opts = VerifyOptions {
        field: Field::prime(7).unwrap(),
        ..VerifyOptions::default()
    };
    let r = verify_all(&Sl3Block, opts).unwrap();
    assert!(r.passed);
    let formal: Vec<_> = r.checks.iter().filter(|c| c.status == Status::Formal).map(|c| c.check.as_str()).collect();
    assert_eq!(formal, ["tensor_square_decomposition"]);
}

#[test]
fn deleted_relation_fails_hilbert_check() {
    let p = Sl3Block.presentation(Field::Rationals).unwrap();
    let mut rels = p.relations().to_vec();
    rels.remove(0);
    let broken = QuadraticPresentation::new(p.quiver().clone(), rels, p.field()).unwrap();
    let opts = VerifyOptions {
        max_degree: 6,
        ..VerifyOptions::default()
    };
    let r = verify_presentation("sl3-block minus a relation", Some(&Sl3Block), broken, opts);
    assert!(!r.passed);
    let hilbert = r.checks.iter().find(|c| c.check == "hilbert_matrix").unwrap();
    assert_eq!(hilbert.status, Status::Fail);
    assert!(r.to_table().contains("fail   hilbert_matrix"));
}

#[test]
fn printed_centre_forms_are_not_central() {
    let alg = GradedAlgebra::build(&Sl3Block.presentation(Field::Rationals).unwrap(), 8).unwrap();
    for e in Sl3Block.named_elements() {
        let x = build_named(&alg, &e).unwrap();
        let central = is_central(&alg, &x).unwrap();
        match e.name {
            "z_gamma_lambda" | "z_mu_lambda" => assert!(central, "{}", e.name),
            "z_gamma_lambda_printed" | "z_mu_lambda_printed" => assert!(!central, "{}", e.name),
            _ => {}
        }
    }
}
