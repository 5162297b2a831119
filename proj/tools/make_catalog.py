#!/usr/bin/env python3
"""Regenerate data/ukb_catalog.csv from nominal UKB section dimensions.

Section properties are derived from the nominal (h, b, tw, tf, r) geometry
of each rolled I-section, fillets included:

  hw   = h - 2*tf                     clear web depth
  af   = r^2 * (1 - pi/4)             area of one root fillet
  zf   = hw/2 - 0.2234*r              fillet centroid offset from mid-depth
  A    = 2*b*tf + tw*hw + 4*af
  Iyy  = (b*h^3 - (b - tw)*hw^3)/12 + 4*af*zf^2
  Wpl  = b*tf*(h - tf) + tw*hw^2/4 + 4*af*zf
  Avz  = tw*hw                        web rectangle between flanges
  mass = A * 7850e-6                  kg/m for A in mm^2

Values track the published section tables closely (within rounding of the
tabulated properties). Run from the repo root:

  python3 tools/make_catalog.py > data/ukb_catalog.csv
"""
import math

# designation: (h, b, tw, tf, r) in mm
UKB = {
    "127x76x13":   (127.0, 76.0, 4.0, 7.6, 7.6),
    "152x89x16":   (152.4, 88.7, 4.5, 7.7, 7.6),
    "178x102x19":  (177.8, 101.2, 4.8, 7.9, 7.6),
    "203x102x23":  (203.2, 101.8, 5.4, 9.3, 7.6),
    "203x133x25":  (203.2, 133.2, 5.7, 7.8, 7.6),
    "203x133x30":  (206.8, 133.9, 6.4, 9.6, 7.6),
    "254x102x22":  (254.0, 101.6, 5.7, 6.8, 7.6),
    "254x102x25":  (257.2, 101.9, 6.0, 8.4, 7.6),
    "254x102x28":  (260.4, 102.2, 6.3, 10.0, 7.6),
    "254x146x31":  (251.4, 146.1, 6.0, 8.6, 7.6),
    "254x146x37":  (256.0, 146.4, 6.3, 10.9, 7.6),
    "254x146x43":  (259.6, 147.3, 7.2, 12.7, 7.6),
    "305x102x25":  (305.1, 101.6, 5.8, 7.0, 7.6),
    "305x102x28":  (308.7, 101.8, 6.0, 8.8, 7.6),
    "305x102x33":  (312.7, 102.4, 6.6, 10.8, 7.6),
    "305x127x37":  (304.4, 123.3, 7.1, 10.7, 8.9),
    "305x127x42":  (307.2, 124.3, 8.0, 12.1, 8.9),
    "305x127x48":  (311.0, 125.3, 9.0, 14.0, 8.9),
    "305x165x40":  (303.4, 165.0, 6.0, 10.2, 8.9),
    "305x165x46":  (306.6, 165.7, 6.7, 11.8, 8.9),
    "305x165x54":  (310.4, 166.9, 7.9, 13.7, 8.9),
    "356x127x33":  (349.0, 125.4, 6.0, 8.5, 10.2),
    "356x127x39":  (353.4, 126.0, 6.6, 10.7, 10.2),
    "356x171x45":  (351.4, 171.1, 7.0, 9.7, 10.2),
    "356x171x51":  (355.0, 171.5, 7.4, 11.5, 10.2),
    "356x171x57":  (358.0, 172.2, 8.1, 13.0, 10.2),
    "356x171x67":  (363.4, 173.2, 9.1, 15.7, 10.2),
    "406x140x39":  (398.0, 141.8, 6.4, 8.6, 10.2),
    "406x140x46":  (403.2, 142.2, 6.8, 11.2, 10.2),
    "406x178x54":  (402.6, 177.7, 7.7, 10.9, 10.2),
    "406x178x60":  (406.4, 177.9, 7.9, 12.8, 10.2),
    "406x178x67":  (409.4, 178.8, 8.8, 14.3, 10.2),
    "406x178x74":  (412.8, 179.5, 9.5, 16.0, 10.2),
    "457x152x52":  (449.8, 152.4, 7.6, 10.9, 10.2),
    "457x152x60":  (454.6, 152.9, 8.1, 13.3, 10.2),
    "457x152x67":  (458.0, 153.8, 9.0, 15.0, 10.2),
    "457x152x74":  (462.0, 154.4, 9.6, 17.0, 10.2),
    "457x152x82":  (465.8, 155.3, 10.5, 18.9, 10.2),
    "457x191x67":  (453.4, 189.9, 8.5, 12.7, 10.2),
    "457x191x74":  (457.0, 190.4, 9.0, 14.5, 10.2),
    "457x191x82":  (460.0, 191.3, 9.9, 16.0, 10.2),
    "457x191x89":  (463.4, 191.9, 10.5, 17.7, 10.2),
    "457x191x98":  (467.2, 192.8, 11.4, 19.6, 10.2),
    "533x210x82":  (528.3, 208.8, 9.6, 13.2, 12.7),
    "533x210x92":  (533.1, 209.3, 10.1, 15.6, 12.7),
    "533x210x101": (536.7, 210.0, 10.8, 17.4, 12.7),
    "533x210x109": (539.5, 210.8, 11.6, 18.8, 12.7),
    "533x210x122": (544.5, 211.9, 12.7, 21.3, 12.7),
    "610x229x101": (602.6, 227.6, 10.5, 14.8, 12.7),
    "610x229x113": (607.6, 228.2, 11.1, 17.3, 12.7),
    "610x229x125": (612.2, 229.0, 11.9, 19.6, 12.7),
    "610x229x140": (617.2, 230.2, 13.1, 22.1, 12.7),
    "610x305x149": (612.4, 304.8, 11.8, 19.7, 16.5),
    "610x305x179": (620.2, 307.1, 14.1, 23.6, 16.5),
    "610x305x238": (633.0, 311.4, 18.4, 31.4, 16.5),
    "686x254x125": (677.9, 253.0, 11.7, 16.2, 15.2),
    "686x254x140": (683.5, 253.7, 12.4, 19.0, 15.2),
    "686x254x152": (687.5, 254.5, 13.2, 21.0, 15.2),
    "686x254x170": (692.9, 255.8, 14.5, 23.7, 15.2),
    "762x267x134": (750.0, 264.4, 12.0, 15.5, 16.5),
    "762x267x147": (754.0, 265.2, 12.8, 17.5, 16.5),
    "762x267x173": (762.2, 266.7, 14.3, 21.6, 16.5),
    "762x267x197": (769.8, 268.0, 15.6, 25.4, 16.5),
    "838x292x176": (834.9, 291.7, 14.0, 18.8, 17.8),
    "838x292x194": (840.7, 292.4, 14.7, 21.7, 17.8),
    "838x292x226": (850.9, 293.8, 16.1, 26.8, 17.8),
    "914x305x201": (903.0, 303.3, 15.1, 20.2, 19.1),
    "914x305x224": (910.4, 304.1, 15.9, 23.9, 19.1),
    "914x305x253": (918.4, 305.5, 17.3, 27.9, 19.1),
    "914x305x289": (926.6, 307.7, 19.5, 32.0, 19.1),
    "914x419x343": (911.8, 418.5, 19.4, 32.0, 24.1),
    "914x419x388": (921.0, 420.5, 21.4, 36.6, 24.1),
    "1016x305x222": (970.3, 300.0, 16.0, 21.1, 30.0),
    "1016x305x249": (980.2, 300.0, 16.5, 26.0, 30.0),
    "1016x305x272": (990.1, 300.0, 16.5, 31.0, 30.0),
    "1016x305x314": (1000.0, 300.0, 19.1, 35.9, 30.0),
    "1016x305x349": (1008.1, 302.0, 21.1, 40.0, 30.0),
    "1016x305x393": (1016.0, 303.0, 24.4, 43.9, 30.0),
    "1016x305x437": (1026.1, 305.4, 26.9, 49.0, 30.0),
    "1016x305x487": (1036.1, 308.5, 30.0, 54.1, 30.0),
}


def properties(h, b, tw, tf, r):
    hw = h - 2 * tf
    af = r * r * (1 - math.pi / 4)
    zf = hw / 2 - 0.2234 * r
    area = 2 * b * tf + tw * hw + 4 * af
    iyy = (b * h**3 - (b - tw) * hw**3) / 12 + 4 * af * zf**2
    wpl = b * tf * (h - tf) + tw * hw**2 / 4 + 4 * af * zf
    avz = tw * hw
    mass = area * 7850e-6
    return mass, area / 1e2, iyy / 1e4, wpl / 1e3, avz / 1e2


def main():
    print("designation,mass_kg_m,depth_mm,Iyy_cm4,Wply_cm3,Avz_cm2,A_cm2")
    for name, (h, b, tw, tf, r) in UKB.items():
        mass, a_cm2, iyy, wpl, avz = properties(h, b, tw, tf, r)
        print(f"{name},{mass:.1f},{h:.1f},{iyy:.1f},{wpl:.1f},{avz:.2f},{a_cm2:.1f}")


if __name__ == "__main__":
    main()
