//! Frozen reference values for the complex Bessel routines: 50 pseudo-random
//! points in the closed disk |z| <= 15 (splitmix64 stream, seed 0x5eed,
//! r = 15 sqrt(u1), theta = 2 pi u2, coordinates rounded to f64) evaluated
//! with mpmath at 50 decimal digits and printed to 17 significant digits.

// (z_re, z_im, J0_re, J0_im, J1_re, J1_im)
pub const BESSEL_REFERENCE: [(f64, f64, f64, f64, f64, f64); 50] = [
    (-1.4696857326417609, 2.5653438666455455, 1.2135584064892404, 2.8959136318844079, -2.5890341606823450, 0.70082787149070057),
    (-8.4370928539818362, 3.2967987288231200, 0.10748990027571010, 3.5920600008823179, -3.5390443730079395, -0.086370968514966817),
    (-2.2182412682668526, 2.3623443684276646, -0.55676348846061031, 2.3305150423090010, -2.0441585074894422, -0.79601806575186937),
    (5.4201201757169759, 2.6516116457225714, 0.29721642553715813, 2.2900591025257801, -2.2114290149029355, 0.47047933439578176),
    (0.40323072642498664, 13.856293271625043, 104269.61201364029, -42665.721459369506, 41211.328717544564, 100390.43651192451),
    (-6.9725291410757677, 5.4126988137493521, 29.618889690298214, 6.6861681857313736, -7.8301453644470615, 28.296626566203543),
    (2.4617761032134786, 4.9421371491276034, -14.658828666623482, -19.375987940626078, 17.106124308637096, -14.300684310609869),
    (-9.3006431783481371, -8.0992992600231499, -319.07745207311957, -199.76467573138220, -184.45585369297342, 316.91533898122274),
    (13.221654931837186, 6.4339295581930545, 64.750192082539044, -5.7431377933255404, 7.6682987114587171, 63.633933771095652),
    (-0.79556869570769406, -7.9085295264106792, 288.12282460231535, -264.99776064122638, -249.77599697597110, -267.64393304878115),
    (-12.640032621361197, 3.4395442912055754, 2.8669761380938530, -1.9081968544691896, 1.7891375248171290, 2.9064080884614549),
    (-12.747368597683890, -6.2438945514681361, 50.716543725135788, 20.540151795992756, 18.602365400533155, -50.611457516328279),
    (-3.2286999411147295, -2.0725279029701977, -1.4962834267405887, -0.68387674889721755, -0.50800986046165378, 1.4528909687393639),
    (8.9272204276795062, 12.039871502588678, -11964.610479553432, -12869.526326974169, 12278.262002461564, -11905.292737690793),
    (5.1512201013124956, 7.0864710242018152, 18.757199909897644, 161.97896088387030, -153.77322134046301, 23.601639802008982),
    (8.9152405187833086, -8.2956954476324523, -276.40455688865171, 369.22208513811113, 350.38928006370663, 280.13149274554489),
    (9.2526117114152076, 5.6871006745262314, -27.651871566506420, -22.927749857835194, 21.278619143830535, -27.921906671915356),
    (-5.1401968298208143, 3.9242940838737117, -0.39048755237059042, -8.0173289945223345, 7.6814430830540537, 0.14770172550874518),
    (0.91415452747094006, 8.4995258448932756, 444.77237806380573, -515.36901628329976, 487.39808769902546, 414.60430439476042),
    (-1.1198444847675730, 3.4510537848662244, 4.0076022857555199, 5.5671324444602696, -4.9941642807787120, 3.1448211632712071),
    (9.2962255081396066, 0.29018519539534254, -0.16447142811867373, -0.059086985515319577, 0.20869472806892112, -0.052596683552100595),
    (4.0203650031411682, 5.7604953097358278, -41.035551696924634, 25.872010157661684, -26.129031340346807, -37.485622842347784),
    (7.2568603567249870, 3.9720691390702685, 6.7574164504419904, -3.0547857515075024, 3.3376987002522873, 6.3978708362213119),
    (0.84866251436273155, -0.29740844683308704, 0.84440850139630366, 0.11643872023436780, 0.40004716194530134, -0.11168879337456989),
    (-3.5624445483432394, 4.6954517804901226, -18.236824232420365, -1.4898434646960672, 2.3956156891732269, -16.910036226068465),
    (-6.1597914519314969, 1.0168088819432113, 0.32337416504162972, -0.28259924427596327, 0.35177593858149331, 0.28138362725585611),
    (-0.66410554399022681, -8.0412399392869851, 360.64041723119430, -258.24397166678421, -243.71347740652266, -336.16037766287771),
    (11.998762880388805, 4.0014696505642107, 2.2193789576341119, 5.7342525547349163, -5.5863078275320720, 2.4104056378677257),
    (8.9880198720496676, -5.0476072038409283, -10.875645880992721, 16.122415839071147, 15.282241851837708, 11.322847371484467),
    (-14.149861899558848, -3.2025649643668053, 1.6054896684842166, -2.0199505522269894, -2.0653667410652487, -1.5192058869866615),
    (-0.21349864422277373, -4.5920238643719786, 18.610767166077708, -3.5509777848826701, -3.2477685073820296, -16.417451345990353),
    (7.0507931021456063, 6.9641023831749154, 126.48337566006369, -47.921136897055019, 50.940132132373699, 120.23015890999182),
    (-12.913482219697396, -6.8300058654140541, 94.951714549734064, 19.528109327362336, 16.305049702612608, -94.067397160289945),
    (-11.358680030839722, 2.8301196882865436, -0.60913958035418004, -1.8797016903070741, 1.8990264830781433, -0.51754478618112194),
    (12.350684759627089, 0.27705732716997566, 0.12572077015229527, 0.052602890546565442, -0.19438228606433688, 0.038114065453473140),
    (2.7095072325226295, 6.5240114450217206, -83.652845805745792, -61.868392686226476, 55.252761502213768, -79.843718341347950),
    (10.376086498064952, -3.9997696911259575, -6.1829985776918648, -2.1800065021650841, -2.4096892369411956, 5.9909299413350913),
    (-0.48449145778895331, -4.8708342834271638, 21.987070001942146, -10.125138624063305, -9.2863146142885278, -19.484753566631204),
    (-4.8449843688651875, 8.6237293402538722, -92.613457753859932, -707.54503460004761, 678.30865727854597, -70.075537291973286),
    (5.0690623210432770, 10.000035026451897, 308.46428898176601, 2633.4746161700571, -2520.6498691186225, 351.48975504295248),
    (-9.1161902033579327, 5.9145491650607216, -30.883996052614652, 32.857557957155883, -30.830908892755413, -31.427102083973514),
    (0.28249311198699034, -0.75511633578158777, 1.1234470783537572, 0.11329588885116422, 0.17091264011183833, -0.39296729746862088),
    (0.48168521651423923, -0.74246033226130925, 1.0732063607020628, 0.18588497756614685, 0.28399494050371490, -0.36313077020634181),
    (-2.9448448183084128, -0.82213323440759423, -0.36956124760257633, -0.31389631154351441, -0.42774885382653905, 0.32854194111609172),
    (5.7852114319547843, -4.8627441504611042, 11.069994581513754, -15.403312158454297, -14.174657122838830, -11.421422755873766),
    (7.5420551445983053, 2.7820824297873061, 1.8463555533080625, -1.3519520448605844, 1.4396795873782175, 1.7126470513438092),
    (-4.7439427981873763, -2.2567281970266380, -0.89832492905047043, 1.4152496423983943, 1.4620442825122724, 0.70853434978669177),
    (-4.6764441526656624, 1.0825413592142346, -0.41118734183513849, -0.36541753683577955, 0.47144768498866463, -0.26531671676365021),
    (-1.6539574697441821, -4.9880111283711042, 2.2568197950146478, -26.059457810601953, -23.675403619167820, -1.1616874051084993),
    (-12.438428856151644, 6.0142333670695374, 33.815001076978093, -28.282509588498368, 26.731722144510089, 34.232946515425336),
];

// J0(1) = 0.76519768655796655
// J1(1) = 0.44005058574493352
// J0(15) = -0.014224472826780773
// J1(15) = 0.20510403861352276
// J0(2.5-3.5i) = (-3.6726581127658115 + 5.3872868096415942j)
// j01 (first zero of J0) = 2.4048255576957728
