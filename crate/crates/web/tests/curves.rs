use eventclock_web::{echo_curve, event_time_curve, variance_curve, ECHO_COLUMNS, EVENT_COLUMNS, VARIANCE_COLUMNS};

#[test]
fn echo_bound_falls_a_third_decade_per_decade() {
    let rows = echo_curve(1e-31, 1e-8, 2.0, 0.0, 50.0, 51).unwrap();
    let bound: Vec<f64> = rows.chunks(ECHO_COLUMNS).map(|r| r[1]).collect();
    for w in bound.windows(2) {
        assert!((w[0] - w[1] - 1.0 / 3.0).abs() < 1e-12);
    }
    for r in rows.chunks(ECHO_COLUMNS) {
        // e^{x²}erfc(x) never exceeds its asymptotic bound
        assert!(r[2] <= r[1] + 1e-12);
        assert!(r.iter().all(|x| x.is_finite()));
    }
    // log10 bound at T = 1 s with rounded Planck time
    assert!((rows[1] - 4.666057217667521e-3f64.log10()).abs() < 1e-12);
}

#[test]
fn variance_minimum_near_inverse_root_six() {
    let rows = variance_curve(0.05, 10.0, 2001).unwrap();
    let best = rows
        .chunks(VARIANCE_COLUMNS)
        .min_by(|a, b| a[1].total_cmp(&b[1]))
        .unwrap();
    assert!((best[0] - 1.0 / 6f64.sqrt()).abs() < 2e-3);
    assert!((best[1] - 0.5).abs() < 1e-4);
}

#[test]
fn event_time_slope() {
    let rows = event_time_curve(1e-31, 3e23, 300.0, 2.0, -8.0, -4.0, 9).unwrap();
    let r: Vec<&[f64]> = rows.chunks(EVENT_COLUMNS).collect();
    assert!((r[0][1] + 31.0).abs() < 1e-10);
    for w in r.windows(2) {
        let slope = (w[1][2] - w[0][2]) / (w[1][0] - w[0][0]);
        assert!((slope + 14.5).abs() < 1e-9);
        assert!((w[0][3] - w[0][2] - 1.5 * 2f64.log10()).abs() < 1e-12);
    }
}

#[test]
fn invalid_inputs_are_errors() {
    assert!(echo_curve(-1.0, 1e-8, 2.0, 0.0, 1.0, 3).is_err());
    assert!(variance_curve(0.0, 1.0, 3).is_err());
    assert!(event_time_curve(1e-31, 3e23, -1.0, 2.0, -8.0, -4.0, 3).is_err());
}
