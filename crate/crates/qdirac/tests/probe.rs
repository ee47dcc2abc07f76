// temporary probe (run as a test)
#[test]
fn probe_z_relations() {
    use qdirac::qarith::QParam;
    use qdirac::repn::*;
    let h = QParam::new(0.5).unwrap();
    let basis = BasisSpec::sphere(1, 8);
    let dims = dim_table_for(&basis, h);
    let z1 = build_pi_z(1, h, &basis, &dims).unwrap();
    let z2 = build_pi_z(2, h, &basis, &dims).unwrap();
    let interior = basis.interior_indices(2).unwrap();
    let dim = basis.len();
    let pairs: Vec<(&str, &SparseOperator, &SparseOperator)> =
        vec![("z1,z2", &z1, &z2), ("z2,z1", &z2, &z1)];
    for (name, a, b) in pairs {
        for c in [-1.0f64, 1.0] {
            let qc = h.value().powf(c);
            let mut worst = 0.0f64;
            for &v in &interior {
                let mut x = vec![0.0; dim];
                x[v as usize] = 1.0;
                let mut t1 = vec![0.0; dim];
                let mut t2 = vec![0.0; dim];
                b.apply(&x, &mut t1); a.apply(&t1, &mut t2); // a b x
                let mut u1 = vec![0.0; dim];
                let mut u2 = vec![0.0; dim];
                a.apply(&x, &mut u1); b.apply(&u1, &mut u2); // b a x
                let r: f64 = t2.iter().zip(u2.iter()).map(|(p, q2)| (p - qc * q2).powi(2)).sum::<f64>().sqrt();
                worst = worst.max(r);
            }
            println!("{} ab - q^{} ba: {:.3e}", name, c, worst);
        }
    }
    // z z* families
    let z1s = z1.adjoint();
    let z2s = z2.adjoint();
    let combos: Vec<(&str, &SparseOperator, &SparseOperator)> = vec![
        ("z1 z2*", &z1, &z2s),
        ("z2 z1*", &z2, &z1s),
    ];
    for (name, a, b) in combos {
        for c in [-1.0f64, 1.0] {
            let qc = h.value().powf(c);
            let mut worst = 0.0f64;
            for &v in &interior {
                let mut x = vec![0.0; dim];
                x[v as usize] = 1.0;
                let mut t1 = vec![0.0; dim];
                let mut t2 = vec![0.0; dim];
                b.apply(&x, &mut t1); a.apply(&t1, &mut t2); // a b* x
                let mut u1 = vec![0.0; dim];
                let mut u2 = vec![0.0; dim];
                a.apply(&x, &mut u1); b.apply(&u1, &mut u2); // b* a x
                let r: f64 = t2.iter().zip(u2.iter()).map(|(p, q2)| (p - qc * q2).powi(2)).sum::<f64>().sqrt();
                worst = worst.max(r);
            }
            println!("{} = q^{} (swap): {:.3e}", name, c, worst);
        }
    }
}
