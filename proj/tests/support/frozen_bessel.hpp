#pragma once

#include <complex>

namespace bubbly::test {

// Reference values computed with mpmath at 40 digits.
struct FrozenCyl {
    int n;
    std::complex<double> z;
    std::complex<double> j, h, jp, hp;
};

inline const FrozenCyl kFrozenCyl[] = {
    {0, {1.0, 0.0}, {0.76519768655796655145, 0.0}, {0.76519768655796655145, 0.088256964215676957983}, {-0.44005058574493351596, 0.0}, {-0.44005058574493351596, 0.78121282130028871655}},
    {1, {0.3, 0.0}, {0.14831881627310400238, 0.0}, {0.14831881627310400238, -2.2931051383885291231}, {0.483230192294616063, 0.0}, {0.483230192294616063, 6.8364102168239112022}},
    {3, {0.013, 0.0}, {4.5770349880948833857e-8, 0.0}, {4.5770349880948833857e-8, -2318191.0650684286974}, {0.000010562314057089437866, 0.0}, {0.000010562314057089437866, 534959634.58176200666}},
    {7, {0.117, 0.0}, {4.6502332667328206085e-13, 0.0}, {4.6502332667328206085e-13, -97800097107.893432136}, {2.7818507788724884893e-11, 0.0}, {2.7818507788724884893e-11, 5850334201401.8549379}},
    {0, {5.0, 0.0}, {-0.17759677131433830435, 0.0}, {-0.17759677131433830435, -0.30851762524903378007}, {0.32757913759146522204, 0.0}, {0.32757913759146522204, -0.1478631433912268448}},
    {2, {12.5, 0.0}, {-0.17336146343878265726, 0.0}, {-0.17336146343878265726, 0.14660018579866909854}, {-0.1377459704645544933, 0.0}, {-0.1377459704645544933, -0.17729428626528823585}},
    {5, {2.0, 0.5}, {0.0034621099584312315126, 0.0075258129009681530096}, {-7.3925161662737744468, -3.8778635926888695657}, {0.012321634215951174965, 0.014237209641665346373}, {18.040822775329567097, 3.1147188874750450921}},
    {0, {0.26, 0.1}, {0.98560970961535927277, -0.012906563562257826583}, {0.73558234015380816667, -0.87542491769027408322}, {-0.12938786150038259335, -0.048799212013028089074}, {0.66297426575864292383, 2.2513319514214540924}},
    {10, {3.3, 0.0}, {0.00003209600151017724921, 0.0}, {0.00003209600151017724921, -1051.4531695258758382}, {0.000092342953984002796646, 0.0}, {0.000092342953984002796646, 2985.443244554474374}},
    {1, {25.0, 0.2}, {-0.12777998372496432706, 0.020397497520684471731}, {-0.10296207303728519902, -0.08051173831726058386}, {0.10340380667468681309, 0.024375090348172141408}, {0.082539023681071329051, -0.10130414238141610113}},
    {4, {45.0, 0.0}, {0.10942114134304918177, 0.0}, {0.10942114134304918177, 0.047216710030026762776}, {-0.048258175526016426173, 0.0}, {-0.048258175526016426173, 0.10846636789332664829}},
    {14, {0.26, 0.0}, {4.5113784210262391731e-24, 0.0}, {4.5113784210262391731e-24, -5.0406683589731188882e+21}, {2.4288127515025626974e-22, 0.0}, {2.4288127515025626974e-22, 2.7137019179910147641e+23}},
    {0, {0.0001, 0.0}, {0.99999999750000000156, 0.0}, {0.99999999750000000156, -5.9372890697093369862}, {-0.000049999999937500002422, 0.0}, {-0.000049999999937500002422, 6366.1980364557613213}},
    {6, {8.0, -0.3}, {0.34387448981631496226, 0.020214225678816350547}, {0.41277795342054597142, 0.059784462434920991615}, {-0.067323924893543011835, 0.04220260164013548741}, {-0.080663976979900201501, 0.27478531959065073628}},
    {2, {30.0, 5.0}, {4.97704568561502901, -9.4018103544553551022}, {0.00059859955954027698063, 0.00078313250301023849621}, {-9.4365981057152036636, -4.8064612709420909881}, {-0.00079390827537035109384, 0.00058582954600170140449}},
};

}  // namespace bubbly::test
