"""
Published full-leaderboard rows used as arithmetic fixtures.
"""

# (model, solve, author, composite)
PUBLISHED = [
    ('Gemini-3.1-Pro-high', 2214, 1624, 1919),
    ('GPT-5.4-high', 2268, 1473, 1870),
    ('GPT-5.2-high', 2047, 1427, 1737),
    ('Claude-Opus-4.6-high', 2043, 1307, 1675),
    ('Gemini-3-Flash-high', 1944, 1401, 1673),
    ('GPT-5.4-low', 1958, 1315, 1637),
    ('Claude-Sonnet-4.6-high', 1932, 1254, 1593),
    ('GPT-5.4-mini-high', 1922, 1218, 1570),
    ('Qwen-3.5-397B-A17B', 1972, 1123, 1548),
    ('Kimi-K2.5', 1925, 1158, 1542),
    ('Gemini-3.1-Pro-low', 1797, 1208, 1503),
    ('Grok-4.20-high', 1950, 1020, 1485),
    ('DeepSeek-V3.2', 1826, 1072, 1449),
    ('GLM-5', 1781, 1095, 1438),
    ('MiniMax-M2.7', 1622, 1122, 1372),
    ('Grok-4.1-fast-high', 1500, 1169, 1335),
    ('GPT-5.4-mini-low', 1568, 1091, 1329),
    ('Step-3.5-Flash', 1624, 1032, 1328),
    ('Gemini-3-Flash-low', 1264, 1226, 1245),
]

# (model, composite CI, rank range)
PUBLISHED_INTERVALS = [
    ('Gemini-3.1-Pro-high', (1856, 2000), (1, 2)),
    ('GPT-5.4-high', (1798, 1975), (1, 3)),
    ('GPT-5.2-high', (1675, 1807), (2, 6)),
    ('Claude-Opus-4.6-high', (1622, 1740), (3, 8)),
    ('Gemini-3-Flash-high', (1620, 1732), (3, 8)),
    ('GPT-5.4-low', (1579, 1699), (3, 10)),
    ('Claude-Sonnet-4.6-high', (1533, 1658), (4, 12)),
    ('GPT-5.4-mini-high', (1516, 1628), (4, 12)),
    ('Qwen-3.5-397B-A17B', (1496, 1606), (6, 12)),
    ('Kimi-K2.5', (1484, 1603), (6, 13)),
    ('Gemini-3.1-Pro-low', (1452, 1555), (7, 14)),
    ('Grok-4.20-high', (1443, 1534), (7, 14)),
    ('DeepSeek-V3.2', (1408, 1492), (10, 15)),
    ('GLM-5', (1397, 1482), (11, 15)),
    ('MiniMax-M2.7', (1324, 1426), (13, 18)),
    ('Grok-4.1-fast-high', (1292, 1386), (15, 19)),
    ('GPT-5.4-mini-low', (1287, 1374), (15, 19)),
    ('Step-3.5-Flash', (1290, 1370), (15, 19)),
    ('Gemini-3-Flash-low', (1178, 1303), (16, 19)),
]
