use qcut_core::QuasimetricSpace;

/// Largest `|d_host(f(u),f(v)) − d_src(u,v)|`; infinite if reachability differs.
pub fn verify_isometry(src: &QuasimetricSpace, host: &QuasimetricSpace, map: &[usize]) -> f64 {
    let mut worst: f64 = 0.0;
    for u in 0..src.size() {
        for v in 0..src.size() {
            let (a, b) = (src.get(u, v), host.get(map[u], map[v]));
            let err = match (a.is_finite(), b.is_finite()) {
                (true, true) => (a - b).abs(),
                (false, false) => 0.0,
                _ => f64::INFINITY,
            };
            worst = worst.max(err);
        }
    }
    worst
}

/// `max(a/b) · max(b/a)` over pairs of equal-size tables; a pair that is
/// zero in one table only makes the result infinite.
pub fn multiplicative_distortion(a: &QuasimetricSpace, b: &QuasimetricSpace) -> f64 {
    let mut up: f64 = 1.0;
    let mut down: f64 = 1.0;
    for x in 0..a.size() {
        for y in 0..a.size() {
            let (da, db) = (a.get(x, y), b.get(x, y));
            if !da.is_finite() || !db.is_finite() {
                if da.is_finite() != db.is_finite() {
                    return f64::INFINITY;
                }
                continue;
            }
            let (za, zb) = (da <= qcut_core::TOL, db <= qcut_core::TOL);
            match (za, zb) {
                (true, true) => {}
                (false, false) => {
                    up = up.max(da / db);
                    down = down.max(db / da);
                }
                _ => return f64::INFINITY,
            }
        }
    }
    up * down
}
