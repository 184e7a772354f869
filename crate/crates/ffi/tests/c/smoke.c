#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include "dgtime.h"

static void ramp(double t, double *out, size_t dim, void *user) {
    double scale = *(double *)user;
    for (size_t i = 0; i < dim; i++) out[i] = scale * (1.0 + t) * exp(-t);
}

int main(void) {
    DgtProblem *p = NULL;
    if (dgt_problem_scalar(0.5, 1.0, 2.0, &p) != DGT_STATUS_OK) return 1;
    double scale = 1.0;
    dgt_problem_set_forcing(p, ramp, &scale);
    DgtSolution *s = NULL;
    if (dgt_solve_uniform(p, 4, 16, &s) != DGT_STATUS_OK) return 2;
    double u = 0.0;
    if (dgt_solution_eval(s, 2.0, &u, 1) != DGT_STATUS_OK) return 3;
    DgtStatus st = dgt_solution_eval(s, 3.0, &u, 1);
    if (st != DGT_STATUS_TIME_OUT_OF_RANGE || dgt_last_error_message() == NULL) return 4;
    DgtReconstruction *rec = NULL;
    if (dgt_reconstruct(s, &rec) != DGT_STATUS_OK) return 5;
    double us = 0.0;
    dgt_reconstruction_eval(rec, 2.0, &us, 1);
    printf("%.15e %.15e\n", u, us);
    dgt_reconstruction_free(rec);
    dgt_solution_free(s);
    dgt_problem_free(p);
    return fabs(u - us) < 1e-12 ? 0 : 6;
}
