//! Frozen reference values written by generate.py; do not edit by hand.
#![allow(dead_code)]

pub const HAVERSINE_PGH_PHL: f64 = 413.8123221731113;

pub const SOCIAL_3: [[f64; 3]; 3] = [
    [0.0, 0.5714285714285714, 0.42857142857142855],
    [0.14285714285714285, 0.0, 0.8571428571428571],
    [0.1111111111111111, 0.8888888888888888, 0.0],
];

pub const COLLINEAR_LON: [f64; 3] = [0.0, 0.899320363724538, 2.6979610911736143];

pub const SPATIAL_3: [[f64; 3]; 3] = [
    [0.0, 0.5016556291390728, 0.4983443708609271],
    [0.501240694789082, 0.0, 0.49875930521091816],
    [0.49958506224066396, 0.5004149377593361, 0.0],
];

pub const DECAY_3_P01: [[f64; 3]; 3] = [
    [0.0, 0.51026912560221, 0.48973087439779],
    [0.5065617655185027, 0.0, 0.4934382344814973],
    [0.4962916403858939, 0.5037083596141061, 0.0],
];

pub const COUNTY_6: [[f64; 6]; 6] = [
    [0.0, 0.26496966074986, 0.07285333714561057, 0.14537875715475473, 0.24693753514654257, 0.2698607098032321],
    [0.25849117420977996, 0.0, 0.35265873311436563, 0.17044003784103665, 0.06136152747402032, 0.15704852736079752],
    [0.035121164377957835, 0.3227000384212489, 0.0, 0.2800627160664295, 0.062473836094469416, 0.2996422450398944],
    [0.2387034733580102, 0.08914779977051374, 0.0642014459758789, 0.0, 0.2960174187617105, 0.3119298621338867],
    [0.11322119417513567, 0.23722449972712611, 0.2312838404591503, 0.1741564514600229, 0.0, 0.24411401417856496],
    [0.13362006376877847, 0.16905990013646793, 0.2888495393653229, 0.2236330279022834, 0.18483746882714724, 0.0],
];

pub const STATE_AGG_3: [[f64; 3]; 3] = [
    [0.0, 0.5020732824486263, 0.49792671755137363],
    [0.41411948706352236, 0.0, 0.5858805129364777],
    [0.4157259631020568, 0.5842740368979432, 0.0],
];

pub const W_5: [[f64; 5]; 5] = [
    [0.0, 0.3195996500528056, 0.15380784903503095, 0.507653457875388, 0.01893904303677543],
    [0.09117272946703436, 0.0, 0.45349361804689015, 0.1199795029103389, 0.3353541495757367],
    [0.09181626600430608, 0.419111587727956, 0.0, 0.16055978075193914, 0.32851236551579893],
    [0.2566309521586224, 0.2980894165038889, 0.14205107599503114, 0.0, 0.30322855534245746],
    [0.054546521343526166, 0.2597961780231726, 0.24998441161980456, 0.4356728890134967, 0.0],
];

pub const Y_5: [f64; 5] = [24.321535813815505, 25.57475360888158, 15.080699409925275, 35.248490726376566, 0.6106689452500591];

pub const LAG_5: [f64; 5] = [28.398795929338668, 13.490348503557401, 18.81189043529909, 16.19262411435994, 27.097629970778627];

pub const V_100: [f64; 100] = [0.30764114774016926, 2.4396443358047493, 3.7909392065879715, 4.90940263488063, 6.485679132525212, 3.944608780078182, 7.180614113966722, 2.2676994669066213, 3.607186660920896, 2.298262943019781, 1.6161271800067645, -0.3967954791900268, -0.7875424653522538, 5.741189400214507, -0.21087511870338327, 1.2834022748104865, 0.40269960496679147, 3.0075403847358073, 0.13128405598036164, 0.2733216429161178, 3.7543422445784413, 3.30049793976219, 2.1859568187101366, 5.383841361616627, 5.783147185990401, 3.759704130611804, 1.5043458777062104, 4.334367248616887, 3.8722728275593874, 7.479556874534056, 3.807679297287381, 4.736400714874527, 2.822358598591029, 7.6020532416947, 2.9796014394096026, 6.592033041726036, 7.914269540369701, 1.3652862324161956, 0.5725266209332682, 1.2055437877867796, 1.1051352493818154, 2.648972833821136, -0.07547533471682444, 4.351147833306452, 3.6624859200440616, 0.7810640090171366, 2.2903939667271063, 7.398052108756356, 3.1930458692910677, 3.6273328858506533, 3.767537690719794, -0.14293759329434774, 4.839634266659216, 5.507519786492821, -0.9277367923311117, 4.27648701896801, 1.0732504929788376, 3.0249771229645748, 1.9476529119556563, 2.385401299229276, -1.8851438348291012, -0.051609550045621067, 3.201982426524799, 0.762936004573513, 3.4657233938448555, 1.337525879687319, 2.3954299711860982, 4.425187584793691, 4.966315595914606, 2.1897949827005387, 7.205733533092221, 3.0019386477236845, 3.942964622069031, 2.1149319103233992, 1.219447423343245, 7.965553279569532, -0.7341384126052422, 0.5121956045288076, 4.84972663844699, -0.27671346935870167, 3.0322259791021584, 1.8136842718169928, -1.3413917644264766, 5.428408170597978, 5.76518709707199, 1.1354454334189557, 2.4163555322117842, 1.9434568839956237, 3.5227750179420334, 1.5994946025318926, 3.6054376284751983, 4.727907745569103, 3.095849248756281, 1.478357685928555, 4.0590855254305325, 4.284404960026303, 1.8164483424272215, 1.811700148874542, 1.6681001355083176, 0.9409663807034279];

pub const V_100_MEAN: f64 = 2.8739543773085914;

pub const V_100_SD: f64 = 2.2426222872236745;

pub const X_8: [[f64; 3]; 8] = [
    [1.0, 2.037873918536257, 0.2546366874512582],
    [1.0, 0.9041325027253838, 0.8335212045269781],
    [1.0, -1.9467702033737777, -0.16811033320353352],
    [1.0, -0.5391765715283015, 0.6103584476613625],
    [1.0, -0.3398894889877703, -0.23003320473657493],
    [1.0, -1.8118152972486112, -0.8696492598577296],
    [1.0, 0.955762867064561, 2.782134576146795],
    [1.0, 0.9946804324834055, -0.8208343709207128],
];

pub const Y_8: [f64; 8] = [4.307493721725323, 2.6773269769730064, -2.482547310257096, -0.13112892897546052, 0.6168866494888587, -2.533206225523166, 1.096079140233922, 3.6378636535664213];

pub const W_8: [f64; 8] = [1.9564212285496743, 1.819402819551908, 1.2831777223392768, 1.9808182026706995, 1.222652730037669, 1.5851006303178932, 1.9089835934840984, 0.9845179119541085];

pub const WLS_8_BETA: [f64; 3] = [0.9701273101975278, 1.8917584065720146, -0.5277052756773243];

pub const WLS_8_SE: [f64; 3] = [0.16479210465711716, 0.1256259958912495, 0.14950602738966673];

pub const X_12: [[f64; 3]; 12] = [
    [1.0, -0.8187729305375936, -0.3636181130748683],
    [1.0, 0.5612737566234928, 1.2451459325294671],
    [1.0, 1.534379789977898, 1.4528262686546218],
    [1.0, -1.1312426123370924, -0.4598635350703725],
    [1.0, 1.0214606501364516, -0.901686723246029],
    [1.0, -1.4922292673603585, 0.46468091845989085],
    [1.0, -2.573965628111452, 1.2504168283179404],
    [1.0, -0.38201331916505793, 1.5207340883653155],
    [1.0, 0.5541280929939243, 0.9753244514317668],
    [1.0, -1.0573213996493074, -0.7354032673614053],
    [1.0, -0.7594988391908881, 0.7996787786473241],
    [1.0, -0.7255593550155157, -0.448098000171708],
];

pub const E_12: [f64; 12] = [-0.296349949981606, -0.11687386535259117, -2.0978332909059203, -1.7122475377338429, -0.10616781235768247, 0.4339426650455355, 2.4145624779822743, -1.1743387179074576, -0.14344165996248157, -0.10077901245457066, -0.8974669029449344, 0.0863182865801946];

pub const W_12: [f64; 12] = [1.0737669646363097, 1.3069427319528208, 0.8132341269307204, 0.8450174520562331, 1.5521061211546359, 1.8450872300935008, 1.8795133534108817, 1.2073702942668465, 1.3276255731858264, 1.083340085187918, 0.570003611636041, 1.8170046337935442];

pub const CR1_12_UNWEIGHTED: [[f64; 3]; 3] = [
    [0.2827063895326032, 0.3424454955410215, -0.08739907000281587],
    [0.3424454955410215, 0.761415873443835, -0.034610183075287904],
    [-0.0873990700028159, -0.03461018307528791, 0.0984782166793203],
];

pub const CR1_12_WEIGHTED: [[f64; 3]; 3] = [
    [0.12534071866114277, 0.22198639573705303, -0.059569696750574684],
    [0.22198639573705303, 0.7600197304079668, -0.11498941642762688],
    [-0.05956969675057468, -0.11498941642762683, 0.09211362446547315],
];

pub const W_6: [[f64; 6]; 6] = [
    [0.0, 0.08993091580991433, 0.1734017790242612, 0.17607763887212488, 0.38420920539006753, 0.176380460903632],
    [0.07226078024017085, 0.0, 0.2642588051802304, 0.22137586669094686, 0.23290004172543208, 0.2092045061632197],
    [0.1483436958392761, 0.28135289131898955, 0.0, 0.11214131109118192, 0.2840403318313306, 0.17412176991922185],
    [0.18763028461082845, 0.29358602267065725, 0.13968469207526965, 0.0, 0.19429087894369312, 0.18480812169955152],
    [0.2700335750968288, 0.20371637334600967, 0.2333535786860996, 0.12814559494542818, 0.0, 0.16475087792563375],
    [0.1682832254941363, 0.24840924720400276, 0.1941904559633678, 0.1654674888561984, 0.22364958248229463, 0.0],
];

pub const X_6: [[f64; 2]; 6] = [
    [1.0, 0.3923947373700432],
    [1.0, 0.9332104077371919],
    [1.0, -0.7190302850526238],
    [1.0, -1.778122908863935],
    [1.0, -0.9824451918152273],
    [1.0, -0.43744003263407444],
];

pub const Y_6: [f64; 6] = [0.8327170528166266, 2.595235152657542, 0.4365921134934055, -0.18766861471064283, 1.3354511660428356, 0.9496249649829928];

pub const SEM_6_LL: [f64; 3] = [-3.8998891891069363, -4.654315294427152, -5.660467597842625];

pub const A_6: [[f64; 6]; 6] = [
    [0.0, 0.13382788256314948, 0.11897332760817925, 0.3287711053828174, 0.2930418750139464, 0.1253858094319075],
    [0.14954742200045365, 0.0, 0.040978686244206815, 0.2852740436949926, 0.3132635016082696, 0.21093634645207743],
    [0.21789282393330597, 0.20859933461108343, 0.0, 0.20728478782393372, 0.18358906300651742, 0.18263399062515953],
    [0.2659647160164151, 0.24986040083177102, 0.11655183787112046, 0.0, 0.15089972380916625, 0.21672332147152717],
    [0.25108339450279415, 0.12305887636688577, 0.21920594654734743, 0.16825674055323747, 0.0, 0.23839504202973527],
    [0.27827464569941635, 0.13503970614270064, 0.3186695228835429, 0.16459905061015598, 0.10341707466418423, 0.0],
];

pub const Z_6: [[f64; 3]; 6] = [
    [1.0, -0.6006307408798665, 1.517353011617533],
    [1.0, -0.046540811981807685, 1.4012007052181576],
    [1.0, 0.04065034168455801, 1.4174939537795028],
    [1.0, -0.05996564182468275, 0.34618254137471255],
    [1.0, -0.6758496345673436, 0.27980900220996446],
    [1.0, 1.7176951740018778, -1.2004126138608984],
];

pub const Q_W_X1: [f64; 6] = [0.0356049905181527, 0.15600938134605657, -0.0017992322385402342, 0.06545058094786646, 0.1131217660820698, -0.26581919085024786];

pub const Q_W_X2: [f64; 6] = [0.3285381047920367, 0.37490263144031305, 0.528602060312467, 0.7265948624291108, 0.8725538070058872, 0.9985411909091358];

pub const Q_A_X1: [f64; 6] = [-0.0037847666409629058, 0.045341698835798014, 0.036619447136537024, 0.10364166186033269, 0.2517755210977549, -0.2402358190319017];

pub const Q_A_X2: [f64; 6] = [0.401459560175126, 0.21820346138259347, 0.526801968477668, 0.700944150507831, 0.6362105635417323, 1.1490890712509847];

pub const Q_W2_X1: [f64; 6] = [0.021819572683973453, -0.01267794799351701, 0.04236141634351497, 0.025084405058992294, 0.005569609547956289, 0.08052608092377038];

pub const Q_W2_X2: [f64; 6] = [0.7646793427658052, 0.7363958708554488, 0.6574060288936185, 0.599615254606447, 0.5460617746796441, 0.5664403294704392];

pub const Q_A2_X1: [f64; 6] = [0.08815771292279753, 0.058698506119599016, 0.03246492028980919, 0.0005186964847752386, -0.027176012937727433, 0.05983643384783743];

pub const Q_A2_X2: [f64; 6] = [0.6528430733113015, 0.7232722663933706, 0.6049513375320693, 0.5677326183692504, 0.6350055415557232, 0.49022765717996125];

pub const Q_WA_X1: [f64; 6] = [0.08303804530142184, 0.04072739736160405, 0.053502200189827535, 0.022236885187887086, -0.009537728254437565, 0.09119634737492545];

pub const Q_WA_X2: [f64; 6] = [0.6815070417308977, 0.7119620371138982, 0.5803418481458833, 0.548944531154294, 0.554926641192138, 0.4823342770520691];

pub const Q_AW_X1: [f64; 6] = [0.042002064395434, 0.003288247874323032, 0.026088734287642728, 0.007701359231061053, -0.024613717111682646, 0.0528738922699895];

pub const Q_AW_X2: [f64; 6] = [0.7328430666440237, 0.7620399906278791, 0.6429614951281206, 0.5907376991438137, 0.6048000265546608, 0.520333718988313];

pub const Z_10: [[f64; 2]; 10] = [
    [1.0, 1.142554790537342],
    [1.0, -1.2704798325056592],
    [1.0, -0.11131054801360786],
    [1.0, -0.15531505922149835],
    [1.0, 1.3723699831776837],
    [1.0, 0.29834164566773097],
    [1.0, 0.49416435881988074],
    [1.0, -0.6811780708572197],
    [1.0, -0.9791775866397112],
    [1.0, -0.10269190183517],
];

pub const Q_10: [[f64; 2]; 10] = [
    [1.1849402161089646, 0.3963733797925579],
    [1.5217628306266697, -0.3760610745509748],
    [-0.31846672564926104, 1.7870982933590753],
    [-0.9055643121765033, -0.712610182515622],
    [0.3284500894298271, 0.29325625459733323],
    [-1.2661113329034464, 0.387317804697133],
    [-2.1068550590505293, -1.1299042207317964],
    [-0.548735339778898, -1.6715755950971534],
    [0.29842135186673124, -0.7794419105183653],
    [0.5420557945334725, -0.719947043555746],
];

pub const XEND_10: [f64; 10] = [-0.3747329515827793, 0.8857016144756619, -1.6415996736626532, 0.8764151088848886, 2.577627328919133, -2.523106241133001, -1.5139450661480771, 0.02829789014918349, -1.1549705499370653, -0.4409337802506035];

pub const Y_10: [f64; 10] = [0.11797053644378247, 1.9381198143978908, -1.1376031495218402, 3.7384284181200207, 7.644930548170793, -5.186485377102198, -1.8435075799480312, -0.10322506766611239, -3.200623431293779, -1.1451911268489918];

pub const TSLS_10_BETA: [f64; 3] = [0.6230458242110147, 0.8758874808403401, 1.6499886459349797];

pub const TSLS_10_SE: [f64; 3] = [0.48440894241289123, 0.5734209156757168, 0.5195677998249344];

pub const CHI2_1_P_3_8415: f64 = 0.049998772071222324;

pub const CHI2_1_P_28_489: f64 = 9.423233993730352e-08;

pub const MORTALITY_20: [(&str, i32, &str, &str); 20] = [
    ("a", 2018, "X42", "T401"),
    ("a", 2018, "X42", ""),
    ("a", 2018, "X44", "T405"),
    ("a", 2019, "X62", "T402;T406"),
    ("a", 2019, "I21", "T401"),
    ("a", 2018, "Y12", "T404"),
    ("a", 2019, "X85", "T400"),
    ("b", 2018, "X40", "T403"),
    ("b", 2018, "X41", "T409"),
    ("b", 2019, "X42", "T401"),
    ("b", 2019, "Y14", ""),
    ("b", 2018, "X60", "T406;T402"),
    ("b", 2019, "K70", "T400"),
    ("b", 2018, "X64", "T401"),
    ("c", 2018, "Y10", "T402"),
    ("c", 2019, "X43", "T40"),
    ("c", 2019, "X45", "T401"),
    ("c", 2018, "X63", "T404"),
    ("c", 2019, "Y13", "T403"),
    ("c", 2018, "X42", "T402"),
];

pub const MORTALITY_POPS: [f64; 3] = [120000.0, 45000.0, 300000.0];

pub const RATES_2018: [f64; 3] = [1.6666666666666667, 6.666666666666667, 1.0];

pub const RATES_POOLED: [f64; 3] = [1.6666666666666667, 4.444444444444445, 0.6666666666666666];

pub const LOO_X: [[f64; 3]; 12] = [
    [0.5349698229101711, -1.0072017550157175, 0.44685636709768],
    [0.6633749362079938, -0.5591983615611387, -1.3780141335477336],
    [-0.7576949919515111, 1.587047898241481, 0.6179446630803037],
    [2.0432930449237356, 0.5686239364315824, 0.14627350680222614],
    [-0.6318699961613649, 0.141809216749943, 0.7090081359951336],
    [1.5455424404701996, 0.11363482959416665, -0.20335444962641333],
    [0.05208295800730407, -0.31517813602921485, 0.5163645097923535],
    [1.9305984407342807, -0.3509365015077812, -0.42739797198174956],
    [0.8397495651207865, 0.18349531087408616, -0.31755249736691954],
    [2.4382379897225923, 0.8943988821290888, -1.96259376799431],
    [-0.22220090273166182, 0.6771562427807383, -0.9850427322867499],
    [1.2050867602656719, 0.07194418428599757, 0.49308415760145097],
];

pub const LOO_Y: [f64; 12] = [-0.7411395388177198, 0.6439020953464359, -0.2942317574332768, 2.969631072808244, -0.48748553322236293, 1.635847033022013, 0.6043169519755364, 0.8745217207332148, -0.3047230183604015, 3.7293819035181413, 0.08814811354885158, 1.610328369329885];

pub const LOO_PENALTY: [f64; 3] = [0.0, 1.0, 1.0];

pub const LOO_GRID: [f64; 20] = [0.4671605312907196, 0.3247666360117901, 0.22577542579421644, 0.15695744956606067, 0.10911568824472817, 0.07585644041769152, 0.05273485092205149, 0.036660888468507784, 0.025486385564775615, 0.017717951645235777, 0.01231739234679027, 0.008562962427181213, 0.005952909793315499, 0.004138420004607786, 0.00287699977476044, 0.0020000695180179225, 0.0013904339207803855, 0.000966619645287445, 0.0006719870140475407, 0.0004671605312907191];

pub const LOO_MSE: [f64; 20] = [0.8961230342930165, 0.8335123744377707, 0.7219714150783793, 0.6718062453383934, 0.6523183488324967, 0.6534882781196946, 0.6680361677357797, 0.6827735548279094, 0.6982246572011604, 0.7104187849250106, 0.7188999465434768, 0.7251433106703128, 0.7306725593190949, 0.734590944772714, 0.7373509793952757, 0.7392871347507914, 0.7406415449030859, 0.74158718504522, 0.7422465513439013, 0.7427058872729265];
