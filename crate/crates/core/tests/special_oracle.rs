//! Frozen extended-precision values (see `oracle/ml_oracle.py`).

use fracou::special::{g_rho_quadrature, g_rho_series, ml_one, ml_two, FractionalOrder};

// (rho, x, E_rho(-x), E_{rho,rho}(-x))
const ML: &[(f64, f64, f64, f64)] = &[
    (0.8, 0.5, 0.60302371586280370036, 0.45793149810111437333),
    (0.8, 1.0, 0.38694857861897685146, 0.25574384475824187052),
    (0.8, 3.0, 0.11292019868221739872, 0.03991566425159708441),
    (0.8, 10.0, 0.024902819761976537376, 0.0022770080856945369187),
    (0.8, 30.0, 0.0075758607992192103803, 0.00021082443010626109207),
    (0.8, 50.0, 0.0044677761579029932956, 0.000073315313829055350737),
    (0.8, 100.0, 0.0022056788685091112591, 0.000017867951949876073561),
    (0.8, 300.0, 0.00072910242552936406554, 1.9523625150886284693e-6),
    (1.2, 0.5, 0.62140396103259633593, 0.74734575805529931065),
    (1.2, 1.0, 0.36351260195051890726, 0.50451572474491503782),
    (1.2, 3.0, -0.035645871490878126527, 0.076960994776386087464),
    (1.2, 10.0, -0.026398347125869208941, -0.0062756504746153944481),
    (1.2, 30.0, -0.006189775580038954311, -0.00026805637764968561791),
    (1.2, 50.0, -0.0035956826952330444312, -0.000090374444015489898009),
    (1.2, 100.0, -0.0017566367124186755203, -0.000021559084843562525283),
    (1.2, 300.0, -0.00057684502057941991555, -2.3244314430505585393e-6),
    (1.2, 1000.0, -0.00017216457522392797817, -2.0705145424100587023e-7),
    (1.5, 0.5, 0.66323679487242795678, 0.89886307554606876232),
    (1.5, 1.0, 0.39662936531808808449, 0.70652803706417579426),
    (1.5, 3.0, -0.17556537379997824292, 0.21497666776826928474),
    (1.5, 10.0, -0.10971305425274014669, -0.063386339712500377276),
    (1.5, 30.0, -0.014470224834105874553, 0.0013125597381136678562),
    (1.5, 50.0, -0.0045783851058392779913, -0.0002833110656227309145),
    (1.5, 100.0, -0.0027898467733372399413, -0.000040187938178347689031),
    (1.5, 300.0, -0.00094017897679972699932, -4.6994920868398389428e-6),
    (1.5, 1000.0, -0.00028209108987501466549, -4.2312553090068829732e-7),
    (1.9, 0.5, 0.74009684574409438439, 0.93663166533735538934),
    (1.9, 1.0, 0.50645955436859065363, 0.84008069049165268627),
    (1.9, 3.0, -0.19800617221635832014, 0.51354051677803679116),
    (1.9, 10.0, -0.78646233666130593997, -0.077252916353400791728),
    (1.9, 30.0, 0.60804777800201299454, -0.02946281277550318084),
    (1.9, 50.0, 0.022022145114234578287, 0.086256241005030163924),
    (1.9, 100.0, 0.10336021818253215501, -0.044165659176399450018),
    (1.9, 300.0, 0.07072167024850466307, 0.012873683509640693757),
    (1.9, 1000.0, 0.045612527373292145941, 0.00031325802072533270968),
];

// (x, E_{1/2}(-x)) from e^{x^2} erfc(x)
const HALF: &[(f64, f64, f64)] = &[
    (0.5, 0.5, 0.61569034419292587487),
    (0.5, 2.0, 0.25539567631050574387),
    (0.5, 10.0, 0.056140992743822585858),
    (0.5, 100.0, 0.0056416137829894329036),
];

// (t, G) for rho = 1.9, mu = 4, lambda = 1
const G_19: &[(f64, f64)] = &[
    (0.5, 0.48863813998593968312),
    (1.0, -0.3148384964063997705),
    (2.0, -0.33565134938263129196),
    (3.0, 0.14446736639159968435),
    (5.0, -0.012392987233834712436),
    (7.0, -0.0015973320999846986485),
    (10.0, -0.00037732420634647291873),
    (20.0, -0.00010477022756824330538),
];

// (t, G) for rho = 1.5, mu = 0.75, lambda = 2
const G_15: &[(f64, f64)] = &[
    (0.5, 0.90673703031785708731),
    (2.0, 0.50014836379477423364),
    (5.0, 0.13881047530572405498),
    (8.0, 0.05189386990034529376),
];

fn close(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= 1e-10 + tol * want.abs()
}

#[test]
fn ml_one_matches_oracle() {
    for &(rho, x, e1, _) in ML {
        let r = ml_one(FractionalOrder::new(rho).unwrap(), x).unwrap();
        assert!(close(r.value, e1, 1e-9), "rho={rho} x={x}: {} vs {e1} ({:?})", r.value, r.method);
    }
}

#[test]
fn ml_two_matches_oracle() {
    for &(rho, x, _, e2) in ML {
        let r = ml_two(FractionalOrder::new(rho).unwrap(), x).unwrap();
        assert!(close(r.value, e2, 1e-9), "rho={rho} x={x}: {} vs {e2} ({:?})", r.value, r.method);
    }
}

#[test]
fn half_order_matches_erfc_form() {
    for &(_, x, e) in HALF {
        let r = ml_one(FractionalOrder::new(0.5).unwrap(), x).unwrap();
        assert!(close(r.value, e, 1e-9), "x={x}: {} vs {e}", r.value);
    }
}

#[test]
fn reported_error_covers_actual_error() {
    for &(rho, x, e1, _) in ML {
        let r = ml_one(FractionalOrder::new(rho).unwrap(), x).unwrap();
        assert!((r.value - e1).abs() <= r.est_abs_error.max(1e-15) * 10.0, "rho={rho} x={x}");
    }
}

#[test]
fn mixture_quadrature_matches_oracle() {
    let cases = G_19.iter().map(|&(t, g)| (1.9, 4.0, 1.0, t, g)).chain(G_15.iter().map(|&(t, g)| (1.5, 0.75, 2.0, t, g)));
    for (rho, mu, lambda, t, g) in cases {
        let r = g_rho_quadrature(FractionalOrder::new(rho).unwrap(), mu, lambda, t).unwrap();
        assert!((r.value - g).abs() <= 1e-8, "rho={rho} t={t}: {} vs {g}", r.value);
    }
}

#[test]
fn mixture_series_matches_oracle_where_certified() {
    for &(t, g) in G_19.iter().filter(|c| c.0 <= 3.0) {
        let r = g_rho_series(1.9, 4.0, -t.powf(1.9)).unwrap();
        assert!((r.value - g).abs() <= 1e-9, "t={t}: {} vs {g}", r.value);
    }
}
