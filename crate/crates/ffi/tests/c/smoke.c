#include <stdio.h>
#include <string.h>

#include "commgraph.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "check failed: %s (line %d)\n", #cond, __LINE__); \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    CgGroup *g = NULL;
    CHECK(cg_group_new("{\"cyclic\":6}", 5000, &g) == CG_STATUS_OK);
    CHECK(cg_group_order(g) == 6);

    CgLattice *l = NULL;
    CHECK(cg_lattice_new(g, 1000, &l) == CG_STATUS_OK);
    CHECK(cg_lattice_len(l) == 4);

    CgGraph *gr = NULL;
    CHECK(cg_graph_new(l, 2, CG_GRAPH_KIND_COMMENSURABILITY, &gr) == CG_STATUS_OK);
    CHECK(cg_graph_vertex_count(gr) == 4);
    CHECK(cg_graph_edge_count(gr) == 2);

    char *dot = NULL;
    CHECK(cg_graph_dot(gr, &dot) == CG_STATUS_OK);
    CHECK(strncmp(dot, "graph G {\n", 10) == 0);
    cg_string_free(dot);

    CgGroup *bad = NULL;
    CHECK(cg_group_new("{\"sym\":9}", 5000, &bad) == CG_STATUS_ORDER_CAP);
    CHECK(cg_last_error() != NULL);

    cg_graph_free(gr);
    cg_lattice_free(l);
    cg_group_free(g);
    printf("ok\n");
    return 0;
}
