from .search import CsbReport, csb_sup, has_angle, is_interval, validity_scan
