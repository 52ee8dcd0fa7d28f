// (lambda, k, q_k) from the circle-kernel route at 30 digits
pub const CIRCLE_Q_REFERENCE: &[(f64, u32, f64)] = &[
    (0.5, 0, -1.5033567875383759062),
    (0.5, 1, -0.19989651232740601688),
    (0.5, 2, -0.060635684149500326191),
    (0.5, 3, -0.027598595374893753396),
    (0.5, 4, -0.01559360034037737483),
    (0.5, 5, -0.0099919287640031990691),
    (0.5, 6, -0.0069417783903032436688),
    (0.5, 7, -0.0051009932480598693341),
    (0.5, 8, -0.0039057828142799316263),
    (1.0, 0, -1.8640905633205031919),
    (1.0, 1, -0.33137955293135285326),
    (1.0, 2, -0.11304436117720599097),
    (1.0, 3, -0.053494258267709602488),
    (1.0, 4, -0.030661104743276807341),
    (1.0, 5, -0.019772975325629486677),
    (1.0, 6, -0.013783317048096850833),
    (1.0, 7, -0.010148392681332853141),
    (1.0, 8, -0.0077803527629450486243),
    (4.0, 0, -2.6183480014561691934),
    (4.0, 1, -0.76421978369483423814),
    (4.0, 2, -0.34193601265838389982),
    (4.0, 3, -0.18389507439975584018),
    (4.0, 4, -0.11201582782642622978),
    (4.0, 5, -0.074542550646758390344),
    (4.0, 6, -0.052894180099160468244),
    (4.0, 7, -0.039371935477388220642),
    (4.0, 8, -0.030400815966184144259),
];
