#pragma once

// Coefficients of the four built-in 4-stage triplets. Entries printed as
// fractions are kept as numerator/denominator pairs until the final division;
// the algebraic nodes of AP4o43vs come from their closed form; everything
// else is the printed 16/17-digit decimal.

#include <array>
#include <string>
#include <string_view>

#include "peer/triplet.hpp"

namespace peer {

namespace detail {

constexpr double frac(long long p, long long q) { return static_cast<double>(p) / static_cast<double>(q); }

inline Mat mat4(std::initializer_list<double> v) {
  Mat m(4, 4);
  auto it = v.begin();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = *it++;
  return m;
}

inline Mat diag4(double a, double b, double c, double d) {
  Vec v(4);
  v << a, b, c, d;
  return v.asDiagonal();
}

inline Vec vec4(double a, double b, double c, double d) {
  Vec v(4);
  v << a, b, c, d;
  return v;
}

inline PeerTriplet make_ap4o33vg() {
  PeerTriplet t;
  t.name = "AP4o33vg";
  t.c = vec4(0.0, frac(1, 3), frac(2, 3), 1.0);
  t.K = diag4(frac(1, 8), frac(3, 8), frac(3, 8), frac(1, 8));
  t.K0 = t.K;
  t.KN = t.K;
  t.A0 = mat4({frac(49, 80), frac(3, 4), -frac(3, 16), 0.0,
               -frac(87, 80), 0.0, frac(9, 16), 0.0,
               frac(87, 80), -frac(9, 4), frac(27, 16), 0.0,
               -frac(49, 80), frac(3, 2), -frac(33, 16), 1.0});
  t.A = mat4({1.0, 0.0, 0.0, 0.0,
              -frac(9, 4), frac(9, 4), 0.0, 0.0,
              frac(9, 4), -frac(9, 2), frac(9, 4), 0.0,
              -1.0, frac(9, 4), -frac(9, 4), 1.0});
  t.AN = mat4({1.0, 0.0, 0.0, 0.0,
               -frac(33, 16), frac(27, 16), frac(9, 16), -frac(3, 16),
               frac(3, 2), -frac(9, 4), 0.0, frac(3, 4),
               -frac(49, 80), frac(87, 80), -frac(87, 80), frac(49, 80)});
  t.bhat.a14 = 1.0;
  t.bhat.a41 = 0.0;
  t.bhat.b24 = Laurent{{-1, frac(1, 36)}};
  t.bhat.b34 = Laurent{};
  t.bhat.b42 = Laurent{{1, frac(1, 36)}};
  t.bhat.b43 = Laurent{{1, frac(1, 18)}};
  t.bhat.b44 = Laurent{{0, frac(13, 1340)}, {2, frac(1, 20)}};
  t.W = mat4({1.0, -2.0, frac(24, 5), -frac(9, 2),
              1.0, -frac(4, 3), 0.0, frac(3, 2),
              1.0, -frac(2, 3), -frac(8, 5), frac(3, 2),
              1.0, 0.0, 0.0, 0.0});
  t.orders = {3, 3, 3, 0};
  t.sigma_interval = {0.57, 1.80};
  t.alpha_deg = 61.59;
  return t;
}

inline PeerTriplet make_ap4o33vs() {
  PeerTriplet t;
  t.name = "AP4o33vs";
  t.c = vec4(frac(144997, 389708), frac(73, 748), frac(77297572, 117896267), 1.0);
  t.K = diag4(0.2089552772313791, 0.2461266069992848, 0.4259606950456414, 0.1189574207236947);
  t.K0 = t.K;
  t.KN = t.K;
  t.A0 = mat4({2.773177556033415, -5.711973424498560, -0.4047906551114346, 0.0,
               -0.2775983738279357, 2.618694207814551, 0.1431328584722113, 0.0,
               -5.101798226146757, 4.755733335146421, 2.836975327925722, 0.0,
               2.606219043941277, -1.662454118462412, -2.575317531286499, 1.0});
  t.A = mat4({0.7588470158140062, 0.0, 0.0, 0.0,
              0.4346633458753195, 0.5989561692950702, 0.0, 0.0,
              -3.295204661275873, -0.3671669165116753, 2.473930545531403, 0.0,
              2.101694299586548, -0.2317892527833949, -2.473930545531403, 1.0});
  t.AN = mat4({0.7588470158140062, 0.0, 0.0, 0.0,
               0.1098911012176018, 0.7137947386723661, 0.2912786335371730, -0.08134495825675107,
               -1.064925547930965, -1.155787455679128, 0.4736590838298028, 0.5586128875241437,
               1.474979453185272, -0.01018461275608742, -1.911848510874736, 0.8430281717173012});
  const double a41 = 0.1010743874247749;
  t.bhat.a14 = 1.0;
  t.bhat.a41 = a41;
  t.bhat.b24 = Laurent{{-1, 0.02321239244678227}};
  t.bhat.b34 = Laurent{};
  t.bhat.b42 = Laurent{{0, a41}, {1, 0.003586671392069201}};
  t.bhat.b43 = Laurent{{0, a41}, {1, 0.007173342784138403}, {2, -0.002465255918355442}};
  t.bhat.b44 = Laurent{{0, 0.0078782707622298066}, {1, 0.1683589306029579}, {2, -0.1125}, {3, 0.025}};
  t.W = mat4({1.0, -frac(49, 3), -4.0, 27.0,
              1.0, -frac(47, 2), 33.0, -frac(95, 3),
              1.0, -9.0, -frac(52, 3), frac(119, 5),
              1.0, 0.0, 0.0, 0.0});
  t.orders = {3, 3, 3, 0};
  t.sigma_interval = {0.65, 1.80};
  t.alpha_deg = 83.74;
  return t;
}

inline PeerTriplet make_ap4o43vs() {
  PeerTriplet t;
  t.name = "AP4o43vs";
  const double r29 = std::sqrt(29.0);
  // The printed closed form (7 - sqrt 29)/2 is off by a factor 10 from the
  // printed decimal 0.0807; the coefficient data requires (7 - sqrt 29)/20.
  t.c = vec4(0.05 * (7.0 - r29), 0.5, 0.1 * (3.0 + r29), 1.0);
  t.K0 = mat4({0.5, 1.0, 0.0, 0.0,
               -1.120097818618729, -3.509114262220923, 0.02331113741482591, -0.07507889931006730,
               1.951080835579074, 6.817902173284554, 0.04964515498231075, 0.2324661353733601,
               -1.097482134196919, -3.777428018384294, 0.04886693226626865, -0.04407123616946104});
  t.A0 = mat4({-2.258093793670717, 1.862197768561405, 0.8958960251093118, 0.0,
               11.58487375982880, -4.941113522467058, -3.725846848775559, -0.02162218680256198,
               -21.42711527957095, 7.401740825625927, 8.196612369685553, 0.2072923201571290,
               12.10033531341286, -4.322825071720274, -5.366661546019306, 0.8143298666454331});
  t.K = diag4(0.2392605543426944, 0.5076556795243664, 0.1624309662178738, 0.09065279991506543);
  t.A = mat4({2.932991332809296, 0.0, 0.0, 0.0,
              -9.722226151163717, 2.605421230471736, 0.0, 0.0,
              15.03085810481218, -5.510604377851853, 2.011734286390463, 0.0,
              -8.241623286457758, 2.905183147380117, -2.011734286390463, 1.0});
  const double a41 = -0.4373259052924791;
  t.bhat.a14 = 1.0;
  t.bhat.a41 = a41;
  t.bhat.b24 = Laurent{{-1, 0.006728479970272900}};
  t.bhat.b34 = Laurent{};
  t.bhat.b42 = Laurent{{0, a41}, {1, 0.0007142621905395870}};
  t.bhat.b43 = Laurent{{0, a41}, {1, 0.001428524381079174}, {2, 0.005699612131335000}};
  t.bhat.b44 = Laurent{{0, a41}, {1, 0.002142786571618761}, {2, -0.01091141501818702}, {3, 0.01709883639400500}};
  t.W = mat4({1.0, -frac(11, 6), frac(25, 6), -frac(7, 6),
              1.0, -1.0, -frac(3, 2), 1.0,
              1.0, -frac(1, 3), -frac(3, 2), -frac(2, 5),
              1.0, 0.0, 0.0, 0.0});
  t.KN = mat4({0.3352224422310586, 0.6666666666666666, 0.25, 0.0,
               -0.4081466631436265, -2.243551054735366, -0.9919828228000089, -0.01618666259097973,
               0.7502573728050319, 4.650087123227831, 1.851360793436682, 0.05011862096669070,
               -0.4323129259705010, -2.589251268789736, -0.9063392628643313, 0.03405764156058810});
  t.AN = mat4({2.133506902525376, -1.201712432255361, 2.001196862539281, 0.0,
               -6.352860439191028, 7.343234398037428, -8.042312319130696, -0.06486656040768594,
               9.042449972383633, -12.89903567845361, 14.76669675894938, 0.6218769604713869,
               -4.823096435717981, 6.757513712671541, -8.725581302357963, 0.4429895999362990});
  t.orders = {3, 3, 4, 2};
  t.sigma_interval = {0.47, 1.79};
  t.alpha_deg = 74.01;
  return t;
}

inline PeerTriplet make_ap4o33va() {
  PeerTriplet t;
  t.name = "AP4o33va";
  t.c = vec4(0.0, frac(53, 34), frac(6242, 30453), frac(298, 153));
  t.K0 = mat4({-0.07894736842105263, -0.3541666666666667, 0.8, 0.0,
               -0.5092967024450286, -0.05954441426546966, 1.5, 0.0,
               -0.2793212824140483, 0.4819625026869399, 0.01024569899875302, 0.0,
               0.4370032270471419, 0.2582293704863321, -1.071186604429968, -0.13497776057693290});
  t.A0 = mat4({-2.845147129315054, -0.4034338322824405, 4.858078566685144, 0.0,
               -3.334526877014251, 0.1129706979359890, 3.683717732206632, 0.0,
               2.756370844715334, 0.6933008415389270, -4.233985411744457, 0.0,
               2.572062980946981, 0.3827708538751709, -2.987953672161328, -0.2542255953866471});
  t.K = diag4(-0.4305621262329876, 0.32648079224113569, 1.239059094568785, -0.1349777605769329);
  t.A = mat4({-6.403144243666246, 0.0, 0.0, 0.0,
              -6.032436530257817, 0.4188810164603250, 0.0, 0.0,
              7.334872792461045, 0.1741541060226739, 2.017487387419302, 0.0,
              4.249467800796027, 0.1925734385846475, -0.6976301724333114, -0.2542255953866471});
  const double a41 = 4.607142857142857;
  t.bhat.a14 = 1.108695652173913;
  t.bhat.a41 = a41;
  t.bhat.b24 = Laurent{{-1, -0.4962124378026289}};
  t.bhat.b34 = Laurent{{-2, -0.6391248143857920}};
  t.bhat.b42 = Laurent{{0, a41}, {1, -0.2679484769093443}};
  t.bhat.b43 = Laurent{{0, a41}, {1, -0.5358969538186886}};
  t.bhat.b44 = Laurent{{0, -frac(2198, 55)}, {1, frac(1607, 22)}, {2, -frac(147, 5)}};
  t.W = mat4({1.0, -2.0, 6.0, 2.509523385281405,
              1.0, 1.117647058823529, 12.32698961937716, 7.052310433008046,
              1.0, -1.590056808852987, 1.836922096090924, 0.5167228373603610,
              1.0, 1.895424836601307, 27.53940792003076, 16.07292401233786});
  t.KN = mat4({-0.4305621262329876, 0.0, 0.0, 0.0,
               -0.7584777455167840, -0.4907990379996561, 0.66666666666666667, 0.9090909090909091,
               -0.4295489737333543, 0.09171637742180421, 1.7797533837522101, -0.2028616928718752,
               0.6522412050328370, 0.3192953012669550, -0.51790142522729154, -0.5886128416494334});
  t.AN = mat4({-6.4031442436662458, 0.0, 0.0, 0.0,
               -0.95260517222681956, 1.865037832767615, -6.0, -0.5259881743382867,
               6.79592553738488869, 0.3023172450424132, 2.591223325518416, -0.1629518220426969,
               0.525998613319805586, -0.7619282537426990, 3.676768004714683, 0.04934710726892677});
  t.orders = {3, 3, 3, 2};
  t.sigma_interval = {0.61, 1.52};
  t.alpha_deg = 90.0;
  return t;
}

}  // namespace detail

inline constexpr std::array<std::string_view, 4> kBuiltinNames = {"AP4o33vg", "AP4o33vs", "AP4o43vs",
                                                                  "AP4o33va"};

inline PeerTriplet load_builtin(std::string_view name) {
  if (name == "AP4o33vg") return detail::make_ap4o33vg();
  if (name == "AP4o33vs") return detail::make_ap4o33vs();
  if (name == "AP4o43vs") return detail::make_ap4o43vs();
  if (name == "AP4o33va") return detail::make_ap4o33va();
  throw UnknownTriplet(std::string(name));
}

}  // namespace peer
