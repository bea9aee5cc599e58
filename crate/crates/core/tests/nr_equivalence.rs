use bracketforge::corpus::jacobi_corpus;
use bracketforge::jacobi::first_jacobi_violation;
use bracketforge::nr::compatibility_residuals;

#[test]
fn jacobi_iff_compatible_on_corpus() {
    let corpus = jacobi_corpus();
    assert!(corpus.len() >= 20);
    let (mut jacobi, mut not_jacobi) = (0, 0);
    for e in &corpus {
        let is_jacobi = first_jacobi_violation(&e.algebra, &e.pair.reconstruct(), 3).is_none();
        let compat = compatibility_residuals(&e.algebra, &e.pair, 3);
        eprintln!("{:24} jacobi={} r1={} r2={}", e.name, is_jacobi, compat.r1.len(), compat.r2.len());
        assert_eq!(is_jacobi, compat.is_zero(), "{}", e.name);
        if is_jacobi {
            jacobi += 1;
        } else {
            not_jacobi += 1;
        }
    }
    assert!(jacobi >= 5 && not_jacobi >= 5, "{jacobi} jacobi, {not_jacobi} not");
}
