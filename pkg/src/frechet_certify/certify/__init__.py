"""
Certificates
------------

YES and NO certificates for the answers of the decider and the independent
checker that verifies them.
"""

from frechet_certify.certify.certificates import check_certificate_file

RUNNERS = {
    "check-cert": check_certificate_file,
}
