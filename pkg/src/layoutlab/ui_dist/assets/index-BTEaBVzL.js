var M=Object.defineProperty;var L=(n,t,e)=>t in n?M(n,t,{enumerable:!0,configurable:!0,writable:!0,value:e}):n[t]=e;var h=(n,t,e)=>L(n,typeof t!="symbol"?t+"":t,e);(function(){const t=document.createElement("link").relList;if(t&&t.supports&&t.supports("modulepreload"))return;for(const s of document.querySelectorAll('link[rel="modulepreload"]'))i(s);new MutationObserver(s=>{for(const o of s)if(o.type==="childList")for(const r of o.addedNodes)r.tagName==="LINK"&&r.rel==="modulepreload"&&i(r)}).observe(document,{childList:!0,subtree:!0});function e(s){const o={};return s.integrity&&(o.integrity=s.integrity),s.referrerPolicy&&(o.referrerPolicy=s.referrerPolicy),s.crossOrigin==="use-credentials"?o.credentials="include":s.crossOrigin==="anonymous"?o.credentials="omit":o.credentials="same-origin",o}function i(s){if(s.ep)return;s.ep=!0;const o=e(s);fetch(s.href,o)}})();const R=.001,F=1e3;function P(n){return Math.min(F,Math.max(R,n))}function N(){return{panX:0,panY:0,zoom:1}}function A(n,t,e){return[t*n.zoom+n.panX,e*n.zoom+n.panY]}function q(n,t,e){return[t/n.zoom,e/n.zoom]}function C(n,t,e,i){const s=P(n.zoom*i),o=s/n.zoom;return{zoom:s,panX:t-(t-n.panX)*o,panY:e-(e-n.panY)*o}}function O(n,t,e){return{...n,panX:n.panX+t,panY:n.panY+e}}function T(n,t,e,i,s,o,r=40){const d=Math.max(e-n,1e-9),a=Math.max(i-t,1e-9),p=P(Math.min((s-2*r)/d,(o-2*r)/a)),l=(n+e)/2,u=(t+i)/2;return{zoom:p,panX:s/2-l*p,panY:o/2-u*p}}const _=6;function Y(n,t,e,i,s){let o=-1,r=1/0;for(let d=0;d<t.length;d++){const[a,p]=A(e,n[2*d],n[2*d+1]),l=Math.max(t[d]*e.zoom,_),u=i-a,y=s-p,c=Math.hypot(u,y);c<=l&&c<r&&(o=d,r=c)}return o}function k(n){return{x0:Math.min(n.x0,n.x1),y0:Math.min(n.y0,n.y1),x1:Math.max(n.x0,n.x1),y1:Math.max(n.y0,n.y1)}}function z(n,t,e,i){const s=k(i),o=[];for(let r=0;r<t;r++){const[d,a]=A(e,n[2*r],n[2*r+1]);d>=s.x0&&d<=s.x1&&a>=s.y0&&a<=s.y1&&o.push(r)}return o}function X(n,t,e,i,s,o){const r=Math.atan2(i-t,e-n);let a=Math.atan2(o-t,s-n)-r;return a>Math.PI&&(a-=2*Math.PI),a<-Math.PI&&(a+=2*Math.PI),a}function U(n,t,e,i){let s=!1,o=1/0,r=1/0,d=-1/0,a=-1/0;for(const p of e){s=!0;const[l,u]=A(i,n[2*p],n[2*p+1]),y=Math.max(t[p]*i.zoom,_);o=Math.min(o,l-y),r=Math.min(r,u-y),d=Math.max(d,l+y),a=Math.max(a,u+y)}return s?{x0:o,y0:r,x1:d,y1:a}:null}const B=["SIMULATING","PAUSED","EDITING","FINISHED"];class f extends Error{}function g(n){return typeof n=="number"&&Number.isFinite(n)}function H(n){let t;try{t=JSON.parse(n)}catch(i){throw new f(`malformed JSON frame: ${i}`)}if(typeof t!="object"||t===null||Array.isArray(t))throw new f("frame must be a JSON object");const e=t;switch(e.type){case"init":{if(!Array.isArray(e.nodes)||!Array.isArray(e.edges))throw new f("init: nodes and edges must be arrays");const i=e.nodes.map((o,r)=>{const d=o;if(typeof d.id!="string"||!g(d.radius))throw new f(`init: bad node at index ${r}`);return{id:d.id,radius:d.radius}}),s=e.edges.map((o,r)=>{const d=o;if(!g(d.source)||!g(d.target))throw new f(`init: bad edge at index ${r}`);return{source:d.source,target:d.target}});if(typeof e.params!="object"||e.params===null)throw new f("init: params must be an object");if(!B.includes(e.phase))throw new f(`init: unknown phase ${e.phase}`);return{type:"init",v:g(e.v)?e.v:1,nodes:i,edges:s,params:e.params,phase:e.phase}}case"positions":{if(!g(e.seq)||!Array.isArray(e.xy))throw new f("positions: need numeric seq and xy array");if(e.xy.length%2!==0||!e.xy.every(g))throw new f("positions: xy must be an even list of finite numbers");return{type:"positions",seq:e.seq,xy:e.xy}}case"phase":{if(!B.includes(e.phase))throw new f(`phase: unknown phase ${e.phase}`);return{type:"phase",phase:e.phase}}case"error":{if(typeof e.message!="string")throw new f("error: message must be a string");return{type:"error",message:e.message}}default:throw new f(`unknown server message type ${String(e.type)}`)}}function G(n){switch(n.type){case"pause":case"resume":case"enter_edit":case"exit_edit":case"finish":return JSON.stringify({type:n.type});case"set_params":{for(const[t,e]of Object.entries(n.params))if(!(e===null||typeof e=="string"||typeof e=="boolean"||g(e)))throw new f(`set_params: bad value for ${t}`);return JSON.stringify({type:"set_params",params:n.params})}case"edit_translate":{if(x(n.ids),!g(n.dx)||!g(n.dy))throw new f("edit_translate: dx/dy must be finite");return JSON.stringify({type:"edit_translate",ids:n.ids,dx:n.dx,dy:n.dy})}case"edit_rotate":{if(x(n.ids),!g(n.angle_rad))throw new f("edit_rotate: angle_rad must be finite");if(n.pivot!==void 0&&!(n.pivot.length===2&&n.pivot.every(g)))throw new f("edit_rotate: pivot must be [x, y]");const t={type:"edit_rotate",ids:n.ids,angle_rad:n.angle_rad};return n.pivot!==void 0&&(t.pivot=n.pivot),JSON.stringify(t)}case"set_pinned":{if(x(n.ids),typeof n.pinned!="boolean")throw new f("set_pinned: pinned must be boolean");return JSON.stringify({type:"set_pinned",ids:n.ids,pinned:n.pinned})}}}function x(n){if(!Array.isArray(n)||n.some(t=>typeof t!="string"))throw new f("ids must be an array of strings")}const w=[.42,.62,.92],v=[.95,.73,.25],S=[.88,.42,.42],$="rgba(150, 160, 175, 0.35)",Z=`#version 300 es
layout(location=0) in vec2 corner;       // unit quad
layout(location=1) in vec2 center;       // world units, per instance
layout(location=2) in float radius;      // world units, per instance
layout(location=3) in float flags;       // 0 plain, 1 selected, 2 pinned
uniform vec2 uResolution;                 // device pixels
uniform vec2 uPan;                        // device pixels
uniform float uZoom;
out vec2 vOffset;
flat out float vFlags;
void main() {
  float px = max(radius * uZoom, 1.5);
  vec2 screen = center * uZoom + uPan + corner * (px + 1.0);
  vec2 clip = (screen / uResolution * 2.0 - 1.0) * vec2(1.0, -1.0);
  gl_Position = vec4(clip, 0.0, 1.0);
  vOffset = corner * (px + 1.0) / px;
  vFlags = flags;
}`,V=`#version 300 es
precision mediump float;
in vec2 vOffset;
flat in float vFlags;
uniform vec3 uFill;
uniform vec3 uSelected;
uniform vec3 uPinned;
out vec4 outColor;
void main() {
  float d = length(vOffset);
  if (d > 1.0) discard;
  vec3 base = vFlags > 1.5 ? uPinned : uFill;
  float edge = smoothstep(1.0, 0.88, d);
  vec3 color = base;
  if (vFlags > 0.5 && vFlags < 1.5 && d > 0.72) color = uSelected;
  outColor = vec4(color, edge);
}`,W=`#version 300 es
layout(location=0) in vec2 position;      // world units
uniform vec2 uResolution;
uniform vec2 uPan;
uniform float uZoom;
void main() {
  vec2 screen = position * uZoom + uPan;
  vec2 clip = (screen / uResolution * 2.0 - 1.0) * vec2(1.0, -1.0);
  gl_Position = vec4(clip, 0.0, 1.0);
}`,J=`#version 300 es
precision mediump float;
out vec4 outColor;
void main() { outColor = vec4(0.59, 0.63, 0.69, 0.35); }`;function E(n,t,e){const i=n.createShader(t);if(!i)throw new Error("failed to create shader");if(n.shaderSource(i,e),n.compileShader(i),!n.getShaderParameter(i,n.COMPILE_STATUS)){const s=n.getShaderInfoLog(i);throw n.deleteShader(i),new Error(`shader compile error: ${s}`)}return i}function I(n,t,e){const i=n.createProgram();if(!i)throw new Error("failed to create program");if(n.attachShader(i,E(n,n.VERTEX_SHADER,t)),n.attachShader(i,E(n,n.FRAGMENT_SHADER,e)),n.linkProgram(i),!n.getProgramParameter(i,n.LINK_STATUS))throw new Error(`program link error: ${n.getProgramInfoLog(i)}`);return i}class j{constructor(t,e){h(this,"kind","webgl");h(this,"gl");h(this,"nodeProgram");h(this,"edgeProgram");h(this,"quadBuffer");h(this,"instanceBuffer");h(this,"edgeBuffer");h(this,"instanceData",new Float32Array(0));h(this,"edgeData",new Float32Array(0));h(this,"width",1);h(this,"height",1);h(this,"dpr",1);this.canvas=t,this.gl=e,this.nodeProgram=I(e,Z,V),this.edgeProgram=I(e,W,J),this.quadBuffer=e.createBuffer(),e.bindBuffer(e.ARRAY_BUFFER,this.quadBuffer),e.bufferData(e.ARRAY_BUFFER,new Float32Array([-1,-1,1,-1,-1,1,1,1]),e.STATIC_DRAW),this.instanceBuffer=e.createBuffer(),this.edgeBuffer=e.createBuffer(),e.enable(e.BLEND),e.blendFunc(e.SRC_ALPHA,e.ONE_MINUS_SRC_ALPHA)}resize(t,e,i){this.width=Math.max(1,Math.floor(t*i)),this.height=Math.max(1,Math.floor(e*i)),this.dpr=i,this.canvas.width=this.width,this.canvas.height=this.height,this.gl.viewport(0,0,this.width,this.height)}render(t,e){const i=this.gl,s=t.radii.length;i.clearColor(.078,.086,.102,1),i.clear(i.COLOR_BUFFER_BIT);const o=[e.panX*this.dpr,e.panY*this.dpr],r=e.zoom*this.dpr,d=t.edges.length/2;if(d>0){this.edgeData.length!==d*4&&(this.edgeData=new Float32Array(d*4));for(let a=0;a<d;a++){const p=t.edges[2*a],l=t.edges[2*a+1];this.edgeData[4*a]=t.positions[2*p],this.edgeData[4*a+1]=t.positions[2*p+1],this.edgeData[4*a+2]=t.positions[2*l],this.edgeData[4*a+3]=t.positions[2*l+1]}i.useProgram(this.edgeProgram),i.uniform2f(i.getUniformLocation(this.edgeProgram,"uResolution"),this.width,this.height),i.uniform2f(i.getUniformLocation(this.edgeProgram,"uPan"),o[0],o[1]),i.uniform1f(i.getUniformLocation(this.edgeProgram,"uZoom"),r),i.bindBuffer(i.ARRAY_BUFFER,this.edgeBuffer),i.bufferData(i.ARRAY_BUFFER,this.edgeData,i.DYNAMIC_DRAW),i.enableVertexAttribArray(0),i.vertexAttribPointer(0,2,i.FLOAT,!1,0,0),i.vertexAttribDivisor(0,0),i.drawArrays(i.LINES,0,d*2)}if(s>0){this.instanceData.length!==s*4&&(this.instanceData=new Float32Array(s*4));for(let a=0;a<s;a++)this.instanceData[4*a]=t.positions[2*a],this.instanceData[4*a+1]=t.positions[2*a+1],this.instanceData[4*a+2]=t.radii[a],this.instanceData[4*a+3]=t.pinned.has(a)?2:t.selection.has(a)?1:0;i.useProgram(this.nodeProgram),i.uniform2f(i.getUniformLocation(this.nodeProgram,"uResolution"),this.width,this.height),i.uniform2f(i.getUniformLocation(this.nodeProgram,"uPan"),o[0],o[1]),i.uniform1f(i.getUniformLocation(this.nodeProgram,"uZoom"),r),i.uniform3f(i.getUniformLocation(this.nodeProgram,"uFill"),w[0],w[1],w[2]),i.uniform3f(i.getUniformLocation(this.nodeProgram,"uSelected"),v[0],v[1],v[2]),i.uniform3f(i.getUniformLocation(this.nodeProgram,"uPinned"),S[0],S[1],S[2]),i.bindBuffer(i.ARRAY_BUFFER,this.quadBuffer),i.enableVertexAttribArray(0),i.vertexAttribPointer(0,2,i.FLOAT,!1,0,0),i.vertexAttribDivisor(0,0),i.bindBuffer(i.ARRAY_BUFFER,this.instanceBuffer),i.bufferData(i.ARRAY_BUFFER,this.instanceData,i.DYNAMIC_DRAW),i.enableVertexAttribArray(1),i.vertexAttribPointer(1,2,i.FLOAT,!1,16,0),i.vertexAttribDivisor(1,1),i.enableVertexAttribArray(2),i.vertexAttribPointer(2,1,i.FLOAT,!1,16,8),i.vertexAttribDivisor(2,1),i.enableVertexAttribArray(3),i.vertexAttribPointer(3,1,i.FLOAT,!1,16,12),i.vertexAttribDivisor(3,1),i.drawArraysInstanced(i.TRIANGLE_STRIP,0,4,s)}}}class K{constructor(t){h(this,"kind","canvas2d");h(this,"ctx");h(this,"dpr",1);this.canvas=t;const e=t.getContext("2d");if(!e)throw new Error("no 2d context available");this.ctx=e}resize(t,e,i){this.dpr=i,this.canvas.width=Math.max(1,Math.floor(t*i)),this.canvas.height=Math.max(1,Math.floor(e*i))}render(t,e){const i=this.ctx,s=this.dpr;i.setTransform(1,0,0,1,0,0),i.fillStyle="#14161a",i.fillRect(0,0,this.canvas.width,this.canvas.height),i.setTransform(s,0,0,s,0,0),i.strokeStyle=$,i.lineWidth=1,i.beginPath();for(let o=0;o<t.edges.length;o+=2){const r=t.edges[o],d=t.edges[o+1];i.moveTo(t.positions[2*r]*e.zoom+e.panX,t.positions[2*r+1]*e.zoom+e.panY),i.lineTo(t.positions[2*d]*e.zoom+e.panX,t.positions[2*d+1]*e.zoom+e.panY)}i.stroke();for(let o=0;o<t.radii.length;o++){const r=t.positions[2*o]*e.zoom+e.panX,d=t.positions[2*o+1]*e.zoom+e.panY,a=Math.max(t.radii[o]*e.zoom,1.5);i.beginPath(),i.arc(r,d,a,0,2*Math.PI),i.fillStyle=t.pinned.has(o)?"#e06b6b":"#6b9eeb",i.fill(),t.selection.has(o)&&(i.strokeStyle="#f2ba40",i.lineWidth=2,i.stroke())}}}function Q(n){const t=n.getContext("webgl2",{antialias:!0});return t?new j(n,t):new K(n)}const tt=[{key:"engine",label:"engine",kind:"select",options:["annealed","continuous"],group:"engine"},{key:"alpha",label:"alpha",kind:"number",min:0,max:1,step:.01,group:"annealed"},{key:"alpha_min",label:"alpha min",kind:"number",min:1e-6,max:1,step:5e-4,group:"annealed"},{key:"alpha_decay",label:"alpha decay",kind:"number",min:0,max:1,step:.001,group:"annealed"},{key:"alpha_target",label:"alpha target",kind:"number",min:0,max:1,step:.01,group:"annealed"},{key:"velocity_damping",label:"velocity damping",kind:"number",min:0,max:.99,step:.01,group:"annealed"},{key:"repulsion_strength",label:"repulsion",kind:"number",min:-2e3,max:-.01,step:1,group:"forces"},{key:"theta",label:"theta (accuracy)",kind:"number",min:0,max:2,step:.05,group:"forces"},{key:"link_strength",label:"link strength",kind:"number-or-auto",min:.001,max:10,step:.05,group:"forces"},{key:"link_rest_length",label:"link length",kind:"number",min:.1,max:1e3,step:1,group:"forces"},{key:"link_iterations",label:"link iterations",kind:"number",min:1,max:10,step:1,integer:!0,group:"forces"},{key:"center_strength",label:"centering",kind:"number",min:0,max:1,step:.01,group:"forces"},{key:"collide_enabled",label:"collide",kind:"bool",group:"collide"},{key:"collide_padding",label:"collide padding",kind:"number",min:0,max:100,step:.5,group:"collide"},{key:"collide_iterations",label:"collide iterations",kind:"number",min:1,max:10,step:1,integer:!0,group:"collide"},{key:"time_step",label:"time step",kind:"number",min:.1,max:100,step:.5,group:"continuous"},{key:"spring_coefficient",label:"spring coefficient",kind:"number",min:1e-5,max:1,step:1e-4,group:"continuous"},{key:"drag_coefficient",label:"drag",kind:"number",min:0,max:1,step:.005,group:"continuous"},{key:"gravity_strength",label:"gravity (repel)",kind:"number",min:-100,max:-1e-4,step:.1,group:"continuous"},{key:"stop_epsilon",label:"stop threshold",kind:"number",min:1e-4,max:10,step:.005,group:"continuous"}];function et(n,t){let e=t;return n.min!==void 0&&(e=Math.max(n.min,e)),n.max!==void 0&&(e=Math.min(n.max,e)),n.integer&&(e=Math.round(e)),e}function it(n,t,e){n.textContent="";const i=document.createElement("h1");i.textContent="layoutlab";const s=document.createElement("div");s.className="status",n.append(i,s);const o=()=>{s.textContent=`phase: ${t.phase} | nodes: ${t.nodeCount}`};t.on("phase",o),t.on("init",o),o();const r=new Map,d=l=>{let u=r.get(l);if(!u){u=document.createElement("fieldset");const y=document.createElement("legend");y.textContent=l,u.append(y),r.set(l,u),n.append(u)}return u},a=new Map;for(const l of tt){const u=document.createElement("label"),y=document.createElement("span");if(y.textContent=l.label,u.append(y),l.kind==="select"){const c=document.createElement("select");for(const m of l.options??[]){const b=document.createElement("option");b.value=m,b.textContent=m,c.append(b)}c.addEventListener("change",()=>{e({type:"set_params",params:{[l.key]:c.value}})}),a.set(l.key,m=>{c.value=String(m)}),u.append(c)}else if(l.kind==="bool"){const c=document.createElement("input");c.type="checkbox",c.addEventListener("change",()=>{e({type:"set_params",params:{[l.key]:c.checked}})}),a.set(l.key,m=>{c.checked=!!m}),u.append(c)}else{const c=document.createElement("input");c.type="number",l.step!==void 0&&(c.step=String(l.step)),l.kind==="number-or-auto"&&(c.placeholder="auto"),c.addEventListener("change",()=>{if(l.kind==="number-or-auto"&&c.value.trim()===""){e({type:"set_params",params:{[l.key]:null}});return}const m=Number(c.value);if(!Number.isFinite(m)){c.value="";return}const b=et(l,m);b!==m&&(c.value=String(b)),e({type:"set_params",params:{[l.key]:b}})}),a.set(l.key,m=>{c.value=m==null?"":String(m)}),u.append(c)}d(l.group).append(u)}const p=()=>{for(const[l,u]of a)l in t.params&&u(t.params[l])};t.on("params",p),p()}class nt{constructor(){h(this,"nodeIds",[]);h(this,"radii",new Float64Array(0));h(this,"edges",new Int32Array(0));h(this,"params",{});h(this,"phase","SIMULATING");h(this,"positions",new Float64Array(0));h(this,"selection",new Set);h(this,"pinned",new Set);h(this,"errorMessage",null);h(this,"idToIndex",new Map);h(this,"lastSeq",-1);h(this,"pending",null);h(this,"dirty",!1);h(this,"listeners",new Map)}get nodeCount(){return this.nodeIds.length}on(t,e){let i=this.listeners.get(t);i||this.listeners.set(t,i=new Set),i.add(e)}emit(t){var e;(e=this.listeners.get(t))==null||e.forEach(i=>i())}applyInit(t){this.nodeIds=t.nodes.map(e=>e.id),this.radii=Float64Array.from(t.nodes,e=>e.radius),this.edges=new Int32Array(t.edges.length*2),t.edges.forEach((e,i)=>{this.edges[2*i]=e.source,this.edges[2*i+1]=e.target}),this.params={...t.params},this.phase=t.phase,this.positions=new Float64Array(this.nodeIds.length*2),this.idToIndex=new Map(this.nodeIds.map((e,i)=>[e,i])),this.lastSeq=-1,this.pending=null,this.emit("init"),this.emit("phase"),this.emit("params")}indexOf(t){const e=this.idToIndex.get(t);return e===void 0?-1:e}idsOf(t){return[...t].map(e=>this.nodeIds[e])}offerPositions(t){return t.seq<=this.lastSeq||t.xy.length!==this.positions.length?!1:(this.lastSeq=t.seq,this.pending=t,this.dirty=!0,!0)}takeSnapshot(){this.pending!==null&&(this.positions.set(this.pending.xy),this.pending=null,this.dirty=!0);const t=this.dirty;return this.dirty=!1,t}markDirty(){this.dirty=!0}setPhase(t){t!==this.phase&&(this.phase=t,this.emit("phase"),t==="FINISHED"&&this.emit("finished"))}setError(t){this.errorMessage=t,this.emit("error")}setSelection(t){this.selection=new Set(t),this.dirty=!0,this.emit("selection")}translateLocal(t,e,i){for(const s of t)this.positions[2*s]+=e,this.positions[2*s+1]+=i;this.dirty=!0}rotateLocal(t,e,i){const s=Math.cos(e),o=Math.sin(e);for(const r of t){const d=this.positions[2*r]-i[0],a=this.positions[2*r+1]-i[1];this.positions[2*r]=i[0]+d*s-a*o,this.positions[2*r+1]=i[1]+d*o+a*s}this.dirty=!0}selectionCentroid(){let t=0,e=0,i=0;for(const s of this.selection)t+=this.positions[2*s],e+=this.positions[2*s+1],i+=1;return i?[t/i,e/i]:[0,0]}contentBounds(){if(this.nodeCount===0)return[-1,-1,1,1];let t=1/0,e=1/0,i=-1/0,s=-1/0;for(let o=0;o<this.nodeCount;o++){const r=this.radii[o];t=Math.min(t,this.positions[2*o]-r),i=Math.max(i,this.positions[2*o]+r),e=Math.min(e,this.positions[2*o+1]-r),s=Math.max(s,this.positions[2*o+1]+r)}return[t,e,i,s]}}class st{constructor(t,e){h(this,"store",new nt);h(this,"view",N());h(this,"ws",null);h(this,"renderer");h(this,"drag",{kind:"idle"});h(this,"fitted",!1);h(this,"finished",!1);h(this,"viewDirty",!0);h(this,"canvas");h(this,"banner");h(this,"marqueeBox");h(this,"rotateHandle");h(this,"finishButton");h(this,"pauseButton");h(this,"modeButton");h(this,"pinButton");h(this,"unpinButton");this.canvas=t.querySelector("#view"),this.banner=t.querySelector("#banner"),this.marqueeBox=t.querySelector("#marquee"),this.rotateHandle=t.querySelector("#rotate-handle"),this.finishButton=t.querySelector("#btn-finish"),this.pauseButton=t.querySelector("#btn-pause"),this.modeButton=t.querySelector("#btn-mode"),this.pinButton=t.querySelector("#btn-pin"),this.unpinButton=t.querySelector("#btn-unpin"),this.renderer=Q(this.canvas),it(t.querySelector("#sidebar"),this.store,i=>this.send(i)),this.wireButtons(),this.wirePointer(),this.store.on("phase",()=>this.reflectPhase()),this.store.on("error",()=>this.showBanner(this.store.errorMessage,!1)),this.store.on("finished",()=>this.onFinished()),this.store.on("selection",()=>this.updateRotateHandle()),new ResizeObserver(()=>this.resize()).observe(this.canvas.parentElement),this.resize(),this.connect(e),requestAnimationFrame(()=>this.frame())}connect(t){let e;try{e=new WebSocket(t)}catch(i){this.showBanner(`cannot open session socket: ${i}`,!1);return}this.ws=e,e.onmessage=i=>{let s;try{s=H(String(i.data))}catch(o){this.showBanner(String(o),!1);return}switch(s.type){case"init":this.store.applyInit(s),this.fitted=!1;break;case"positions":this.store.offerPositions(s);break;case"phase":this.store.setPhase(s.phase);break;case"error":this.store.setError(s.message);break}},e.onclose=()=>{this.finished||this.showBanner("session socket closed",!1)},e.onerror=()=>{this.showBanner("session connection failed",!1)}}send(t){this.finished||!this.ws||this.ws.readyState!==WebSocket.OPEN||this.ws.send(G(t))}frame(){const t=this.store.takeSnapshot();if(!this.fitted&&this.store.nodeCount>0){const[e,i,s,o]=this.store.contentBounds(),r=this.canvas.getBoundingClientRect();this.view=T(e,i,s,o,r.width,r.height),this.fitted=!0,this.viewDirty=!0}(t||this.viewDirty)&&(this.renderer.render({positions:this.store.positions,radii:this.store.radii,edges:this.store.edges,selection:this.store.selection,pinned:this.store.pinned},this.view),this.updateRotateHandle(),this.viewDirty=!1),requestAnimationFrame(()=>this.frame())}resize(){const t=this.canvas.parentElement.getBoundingClientRect();this.renderer.resize(t.width,t.height,window.devicePixelRatio||1),this.viewDirty=!0}wireButtons(){this.finishButton.addEventListener("click",()=>{this.finished||(this.send({type:"finish"}),this.finishButton.disabled=!0)}),this.pauseButton.addEventListener("click",()=>{this.send({type:this.store.phase==="SIMULATING"?"pause":"resume"})}),this.modeButton.addEventListener("click",()=>{this.send({type:this.store.phase==="EDITING"?"exit_edit":"enter_edit"})}),this.pinButton.addEventListener("click",()=>this.pinSelection(!0)),this.unpinButton.addEventListener("click",()=>this.pinSelection(!1))}pinSelection(t){if(this.store.phase!=="EDITING"||this.store.selection.size===0)return;const e=[...this.store.selection];this.send({type:"set_pinned",ids:this.store.idsOf(e),pinned:t});for(const i of e)t?this.store.pinned.add(i):this.store.pinned.delete(i);this.store.markDirty(),this.viewDirty=!0}reflectPhase(){const t=this.store.phase;this.canvas.classList.toggle("editing",t==="EDITING"),this.modeButton.textContent=t==="EDITING"?"Simulate mode":"Edit mode",this.modeButton.classList.toggle("active",t==="EDITING"),this.pauseButton.textContent=t==="SIMULATING"?"Pause":"Resume",this.pauseButton.disabled=t==="EDITING"||t==="FINISHED";const e=t==="EDITING";this.pinButton.disabled=!e,this.unpinButton.disabled=!e,this.updateRotateHandle()}onFinished(){this.finished=!0;for(const t of[this.finishButton,this.pauseButton,this.modeButton,this.pinButton,this.unpinButton])t.disabled=!0;this.showBanner("Layout finished; coordinates returned to the caller.",!0)}showBanner(t,e){if(!t){this.banner.style.display="none";return}this.banner.textContent=t,this.banner.className=e?"info":"",this.banner.style.display="block"}updateRotateHandle(){if(this.store.phase!=="EDITING"||this.store.selection.size===0){this.rotateHandle.style.display="none";return}const t=U(this.store.positions,this.store.radii,this.store.selection,this.view);if(!t){this.rotateHandle.style.display="none";return}this.rotateHandle.style.display="block",this.rotateHandle.style.left=`${(t.x0+t.x1)/2}px`,this.rotateHandle.style.top=`${t.y0-24}px`}wirePointer(){this.canvas.addEventListener("pointerdown",t=>this.pointerDown(t)),this.canvas.addEventListener("pointermove",t=>this.pointerMove(t)),this.canvas.addEventListener("pointerup",t=>this.pointerUp(t)),this.canvas.addEventListener("wheel",t=>{t.preventDefault();const e=this.canvas.getBoundingClientRect(),i=Math.exp(-t.deltaY*.0015);this.view=C(this.view,t.clientX-e.left,t.clientY-e.top,i),this.viewDirty=!0},{passive:!1}),this.rotateHandle.addEventListener("pointerdown",t=>{if(this.store.phase!=="EDITING"||this.store.selection.size===0)return;t.preventDefault(),t.stopPropagation(),this.rotateHandle.setPointerCapture(t.pointerId);const e=this.canvas.getBoundingClientRect(),i=[...this.store.selection];this.drag={kind:"rotate",lastX:t.clientX-e.left,lastY:t.clientY-e.top,ids:this.store.idsOf(i),indices:i}}),this.rotateHandle.addEventListener("pointermove",t=>this.pointerMove(t)),this.rotateHandle.addEventListener("pointerup",t=>this.pointerUp(t))}localPoint(t){const e=this.canvas.getBoundingClientRect();return[t.clientX-e.left,t.clientY-e.top]}pointerDown(t){this.canvas.setPointerCapture(t.pointerId);const[e,i]=this.localPoint(t);if(this.store.phase!=="EDITING"){this.drag={kind:"pan",lastX:e,lastY:i};return}const s=Y(this.store.positions,this.store.radii,this.view,e,i);if(s<0){this.drag={kind:"marquee",x0:e,y0:i,x1:e,y1:i},this.marqueeBox.style.display="block",this.updateMarqueeBox();return}if(!this.store.selection.has(s)){const r=t.shiftKey?new Set(this.store.selection):new Set;r.add(s),this.store.setSelection(r),this.viewDirty=!0}const o=[...this.store.selection];this.drag={kind:"move",lastX:e,lastY:i,ids:this.store.idsOf(o),indices:o}}pointerMove(t){const[e,i]=this.localPoint(t),s=this.drag;switch(s.kind){case"idle":return;case"pan":{this.view=O(this.view,e-s.lastX,i-s.lastY),s.lastX=e,s.lastY=i,this.viewDirty=!0;return}case"marquee":{s.x1=e,s.y1=i,this.updateMarqueeBox();return}case"move":{const[o,r]=q(this.view,e-s.lastX,i-s.lastY);if(s.lastX=e,s.lastY=i,o===0&&r===0)return;this.send({type:"edit_translate",ids:s.ids,dx:o,dy:r}),this.store.translateLocal(s.indices,o,r),this.viewDirty=!0;return}case"rotate":{const[o,r]=this.store.selectionCentroid(),d=o*this.view.zoom+this.view.panX,a=r*this.view.zoom+this.view.panY,p=X(d,a,s.lastX,s.lastY,e,i);if(s.lastX=e,s.lastY=i,p===0)return;this.send({type:"edit_rotate",ids:s.ids,angle_rad:p}),this.store.rotateLocal(s.indices,p,[o,r]),this.viewDirty=!0;return}}}pointerUp(t){const e=this.drag;if(this.drag={kind:"idle"},e.kind==="marquee"){this.marqueeBox.style.display="none";const i=k(e),o=(i.x1-i.x0)*(i.y1-i.y0)<9?[]:z(this.store.positions,this.store.nodeCount,this.view,i),r=t.shiftKey?new Set([...this.store.selection,...o]):new Set(o);this.store.setSelection(r),this.viewDirty=!0}}updateMarqueeBox(){if(this.drag.kind!=="marquee")return;const t=k(this.drag);this.marqueeBox.style.left=`${t.x0}px`,this.marqueeBox.style.top=`${t.y0}px`,this.marqueeBox.style.width=`${t.x1-t.x0}px`,this.marqueeBox.style.height=`${t.y1-t.y0}px`}}function ot(n){return`${n.protocol==="https:"?"wss":"ws"}://${n.host}/ws`}const D=document.getElementById("app");if(!D)throw new Error("missing #app root");new st(D,ot(window.location));
