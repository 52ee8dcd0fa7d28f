// (n, x, J_n(x), int_0^x J_n(t) dt)
pub const BESSEL_REFERENCE: &[(u32, f64, f64, f64)] = &[
    (0, 0.001, 0.999999750000015625, 0.00099999991666666979167),
    (0, 0.1, 0.99750156206604003228, 0.0999166979104670233),
    (0, 1.0, 0.76519768655796655145, 0.91973041008976023931),
    (0, 2.5, -0.048383776468197996327, 1.4679809445682599231),
    (0, 5.0, -0.17759677131433830435, 0.71531191778476780233),
    (0, 11.9, 0.025049441699589563728, 0.77048063767988211822),
    (0, 12.1, 0.069666773606807388498, 0.77999641039465711892),
    (0, 20.0, 0.16702466434058315473, 1.0583788214211277585),
    (0, 37.5, 0.071722705110602229323, 0.89034428034948718121),
    (0, 60.0, -0.091471804089061869531, 1.0481087367702835211),
    (0, 150.0, -0.00077409037539429124695, 0.93486289044090773625),
    (0, 600.0, -0.021987789172131950606, 1.0240509446061179451),
    (0, 3000.0, -0.0077918452618898995515, 1.0123095765782121312),
    (1, 0.001, 0.00049999993750000260417, 2.4999998437500043403e-7),
    (1, 0.1, 0.049937526036241997556, 0.0024984379339599677187),
    (1, 1.0, 0.44005058574493351596, 0.23480231344203344855),
    (1, 2.5, 0.49709410246427403801, 1.0483837764681979963),
    (1, 5.0, -0.32757913759146522204, 1.1775967713143383043),
    (1, 11.9, -0.22898324966192407078, 0.97495055830041043627),
    (1, 12.1, -0.21574897337692477718, 0.9303332263931926115),
    (1, 20.0, 0.066833124175850045579, 0.83297533565941684527),
    (1, 37.5, -0.10782334401927695922, 0.92827729488939777068),
    (1, 60.0, 0.046598383758166317869, 1.0914718040890618695),
    (1, 150.0, -0.065145163657727360305, 1.0007740903753942912),
    (1, 600.0, 0.024014365301107028418, 1.0219877891721319506),
    (1, 3000.0, 0.01230698066476485564, 1.0077918452618898996),
    (2, 0.001, 1.2499998958333365885e-7, 4.1666664583333379836e-11),
    (2, 0.1, 0.0012489586587999188454, 0.000041645837983028187396),
    (2, 1.0, 0.11490348493190048047, 0.039629238599893207395),
    (2, 2.5, 0.44605905843961722674, 0.47379273963971184704),
    (2, 5.0, 0.046565116277752215532, 1.3704701929676982464),
    (2, 11.9, -0.063534021474702852935, 1.2284471370037302598),
    (2, 12.1, -0.10532776094183627729, 1.2114943571485066733),
    (2, 20.0, -0.16034135192299815017, 0.92471257306942766733),
    (2, 37.5, -0.077473283458297000482, 1.1059909683880410997),
    (2, 60.0, 0.09302508354766741346, 0.95491196925395088538),
    (2, 150.0, -0.000094511806708740223781, 1.0651532177563624569),
    (2, 600.0, 0.022067837056468974034, 0.97602221400390388823),
    (2, 3000.0, 0.0078000499156664094553, 0.98769561524868241987),
    (3, 0.001, 2.0833332031250032552e-11, 5.2083331163194485135e-15),
    (3, 0.1, 0.000020820315754756261429, 5.206163601300278248e-7),
    (3, 1.0, 0.019563353982668405919, 0.004995343578232487611),
    (3, 2.5, 0.21660039103911352477, 0.15626565958896354286),
    (3, 5.0, 0.36483123061366699446, 1.0844665387588338733),
    (3, 11.9, 0.20762727605698193534, 1.1020186012498161421),
    (3, 12.1, 0.18092987885069790866, 1.1409887482768651661),
    (3, 20.0, -0.098901394560449675613, 1.1536580395054131456),
    (3, 37.5, 0.099559527117058612505, 1.0832238618059917716),
    (3, 60.0, -0.040396711521655156971, 0.90542163699372704261),
    (3, 150.0, 0.065142643342881793899, 1.0009631139888117717),
    (3, 600.0, -0.023867246387397235257, 0.97785211505919400254),
    (3, 3000.0, -0.01229658059821063376, 0.99219174543055708064),
    (5, 0.001, 2.6041665581597241598e-19, 4.3402776421440991598e-23),
    (5, 0.1, 2.603081790964440834e-9, 4.3389216347178043642e-11),
    (5, 1.0, 0.00024975773021123443138, 0.000042065650012577523419),
    (5, 2.5, 0.019501625134503219886, 0.0087018994804530774472),
    (5, 5.0, 0.26114054612017009005, 0.30200181784153751763),
    (5, 11.9, -0.094538171508384770622, 0.7655785152177395771),
    (5, 12.1, -0.051974469766596745778, 0.75089863579745914837),
    (5, 20.0, 0.15116976798239497461, 0.89231617239568665064),
    (5, 37.5, -0.079633594787026318429, 0.89641824621193901468),
    (5, 60.0, 0.02745474422834409975, 1.0995511463933929009),
    (5, 150.0, -0.064998631740725846593, 0.99556267890796374774),
    (5, 600.0, 0.023569826260459329306, 1.0224651340998798953),
    (5, 3000.0, 0.012275714883338999545, 1.0078410315842827421),
    (8, 0.001, 9.6881197705680974997e-32, 1.0764577577219995172e-35),
    (8, 0.1, 9.6854292315946462486e-16, 1.0762131585656873925e-17),
    (8, 1.0, 9.4223441726045005454e-8, 1.0522499053078071575e-8),
    (8, 2.5, 0.0001240773664298689009, 0.000035600917411387829544),
    (8, 5.0, 0.01840521665480200092, 0.011773819188242646505),
    (8, 11.9, 0.065067505530558673634, 1.3126827723581152235),
    (8, 12.1, 0.025039773504706866965, 1.3216990559459358868),
    (8, 20.0, -0.073868928840750341319, 1.1886186216667259308),
    (8, 37.5, 0.13067283698953445026, 0.98024051132100658188),
    (8, 60.0, -0.10330342693895791159, 0.99504917413543842101),
    (8, 150.0, 0.013047482120171820168, 0.93599328461563445334),
    (8, 600.0, -0.023238709545447578166, 1.022848733180377668),
    (8, 3000.0, -0.0079227019721031818719, 1.0122258519480918957),
    (16, 0.001, 7.292903537141348918e-67, 4.2899432637827490018e-71),
    (16, 0.1, 7.2918312330347899941e-35, 4.289378889467406356e-37),
    (16, 1.0, 7.1863965868074928286e-19, 4.2338499394264079616e-20),
    (16, 2.5, 1.5485358613880740805e-12, 2.2995897807398047373e-13),
    (16, 5.0, 7.6750156939122404884e-8, 2.3496691650954723359e-8),
    (16, 11.9, 0.012743808426356876051, 0.01174822988415414528),
    (16, 12.1, 0.015337032617366988687, 0.014549778598046009164),
    (16, 20.0, 0.14517984041982905787, 1.2255677488260028674),
    (16, 37.5, -0.10797107816211751618, 1.095884643459538853),
    (16, 60.0, 0.010199196020579160894, 0.89158798926180291721),
    (16, 150.0, 0.048747735682848771833, 0.95608383120759196708),
    (16, 600.0, -0.02658246975311304912, 1.0188645362270288463),
    (16, 3000.0, -0.0083098082211776133431, 1.0119663647557346516),
    (32, 0.001, 8.8484741888565585169e-142, 2.6813558159657778261e-146),
    (32, 0.1, 8.8478039415759024584e-78, 2.6811643163621355382e-80),
    (32, 1.0, 8.7816862223951472494e-46, 2.662269750837498716e-47),
    (32, 2.5, 4.5747897503788627499e-33, 3.4751633439031175043e-34),
    (32, 5.0, 1.7038251612624253831e-23, 2.6099327629927707041e-24),
    (32, 11.9, 7.7765999253390991099e-12, 2.9928815276504618221e-12),
    (32, 12.1, 1.276689669391458741e-11, 5.0077657083850055229e-12),
    (32, 20.0, 0.000015741257351896430889, 0.000011752849666266664855),
    (32, 37.5, 0.067710812219753079799, 1.2708978285802343327),
    (32, 60.0, 0.045840974651723220237, 0.87828348083723785753),
    (32, 150.0, -0.017764140324956511573, 1.0650334746570320936),
    (32, 600.0, -0.032587521391452882253, 0.99925288113779059725),
    (32, 3000.0, -0.0097693690816497115712, 1.0108086338423329693),
];
